"""Constrained conjunction-and-decision diagrams (CCDDs) for CNF formulas.

Compile a CNF into a CCDD, count its models exactly, draw uniform samples
and answer entailment queries.  Literal equivalences found during search
are factored out into kernelized conjunctions.
"""

from .compiler import CompilerConfig, ResourceLimitError, compile_cnf
from .counter import ModelCount, ct, exact_mc, materialize
from .diagram import Diagram, deserialize, serialize, stats, to_dot, validate
from .formula import CnfFormula, parse_dimacs, to_dimacs
from .queries import consistency, enumerate_models, implicant_check, validity
from .sampler import SamplerState, sample

__all__ = [
    "CnfFormula",
    "CompilerConfig",
    "Diagram",
    "ModelCount",
    "ResourceLimitError",
    "SamplerState",
    "compile_cnf",
    "consistency",
    "ct",
    "deserialize",
    "enumerate_models",
    "exact_mc",
    "implicant_check",
    "materialize",
    "parse_dimacs",
    "sample",
    "serialize",
    "stats",
    "to_dimacs",
    "to_dot",
    "validate",
    "validity",
]
