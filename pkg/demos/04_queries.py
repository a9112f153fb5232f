"""Entailment, consistency, validity and enumeration on a diagram."""

from ccdd import CnfFormula, compile_cnf, consistency, enumerate_models, implicant_check, validity
from ccdd.sampler import format_model

phi = CnfFormula.from_clauses([[1, 7], [2, -3], [-2, 3]], num_vars=7)
d = compile_cnf(phi)

print("consistent:", consistency(d))
print("valid     :", validity(d))

# %% which terms entail the formula
for term in ([1], [-1], [1, 2, 3], [1, 2, -3], [7, -2, -3], []):
    print(f"{str(term):12}", implicant_check(d, term))

# %% models in lexicographic order
for w in enumerate_models(d, scope=[1, 2, 3, 7], limit=6):
    print(format_model(w))
