"""Literal equivalences shrink the compiled diagram."""

import random

from ccdd import CnfFormula, CompilerConfig, compile_cnf, ct, stats
from ccdd.equivalence import construct_core, detect_lit_equ, prime
from ccdd.generators import equivalence_chain

# %% equivalences hidden in a CNF
phi = CnfFormula.from_clauses([
    [1, -3, 4, 7], [1, 3, 5],
    [1, 3], [-1, -3],     # x1 = -x3
    [4, 3], [-4, -3],     # x4 = -x3
    [2, -6], [-2, 6],     # x2 = x6
], num_vars=7)

equs = prime(detect_lit_equ(phi))
print("equivalences:", equs)          # each pair (x, l) means x <-> l
print("core clauses:", construct_core(phi, equs).core.clauses)

# %% compiling with and without kernelization
off = CompilerConfig(kernelization_enabled=False)
on = CompilerConfig()
always = CompilerConfig(kernelize_always=True)

print(" k   edges off   default   always")
for k in (4, 6, 8, 10, 12):
    chain = equivalence_chain(random.Random(k), k)
    sizes = [stats(compile_cnf(chain, cfg))["edges"] for cfg in (off, on, always)]
    print(f"{k:2d}   {sizes[0]:9d}   {sizes[1]:7d}   {sizes[2]:6d}")

# %% the counts never change
chain = equivalence_chain(random.Random(3), 8)
print({name: str(ct(compile_cnf(chain, cfg)).root)
       for name, cfg in [("off", off), ("default", on), ("always", always)]})
