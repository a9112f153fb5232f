"""Counting models two ways: by search, and over a compiled diagram."""

import random

import numpy as np

from ccdd import CnfFormula, compile_cnf, ct, exact_mc, stats
from ccdd.generators import random_ksat
from ccdd.oracle import brute_count

# %% a small formula: x1 xor x2 xor x3, with x4 = -x1 and x5 = -x2
phi = CnfFormula.from_clauses([
    [-1, -2, 3], [-1, 2, -3], [1, -2, -3], [1, 2, 3],
    [-1, -4], [1, 4], [-2, -5], [2, 5],
], num_vars=5)

print("search count  :", exact_mc(phi))
d = compile_cnf(phi)
print("diagram count :", ct(d).root)
print("brute force   :", brute_count(phi))
print("diagram       :", stats(d))

# %% counts are exact integers, however large the scope
wide = CnfFormula.from_clauses([[1, 2]], num_vars=200)
print(exact_mc(wide))   # 3 * 2^198

# %% random 3-SAT around the phase transition
rng = random.Random(0)
rows = []
for ratio in np.arange(2.0, 6.01, 0.5):
    counts = [int(exact_mc(random_ksat(rng, 16, int(ratio * 16)))) for _ in range(20)]
    rows.append((ratio, np.mean(counts), np.mean(np.array(counts) > 0)))

print(" m/n   mean #models   P(sat)")
for ratio, mean, p in rows:
    print(f"{ratio:4.1f}   {mean:12.1f}   {p:5.2f}")
