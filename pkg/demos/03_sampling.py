"""Uniform sampling from a compiled diagram."""

from collections import Counter

import numpy as np
from scipy.stats import chisquare

from ccdd import CnfFormula, SamplerState, compile_cnf, sample
from ccdd.oracle import brute_models
from ccdd.sampler import format_model

phi = CnfFormula.from_clauses([[1, 2, -3], [-1, 4], [2, 3, 5], [-4, -5, 6], [-2, -6]], num_vars=6)
models = brute_models(phi)
print(len(models), "models")

# %% compile once, sample many times
st = SamplerState(compile_cnf(phi), seed=42, scope=range(1, 7))
for _ in range(5):
    print(format_model(sample(st)))

# %% frequencies look flat
draws = 200 * len(models)
hist = Counter(tuple(sample(st).values()) for _ in range(draws))
freq = np.array([hist[tuple(m.values())] for m in models])
print("min/max frequency:", freq.min(), freq.max(), "expected", draws / len(models))
print(chisquare(freq))

# %% same seed, same stream
a = SamplerState(compile_cnf(phi), seed=7)
b = SamplerState(compile_cnf(phi), seed=7)
print(all(sample(a) == sample(b) for _ in range(100)))
