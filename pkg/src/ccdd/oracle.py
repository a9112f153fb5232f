"""Brute-force reference counts and models, plus a uniformity test.

Nothing here uses the search, the diagram or the sampler, so the results
can serve as an independent reference for them.
"""

from __future__ import annotations

import typing as t
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .formula import CnfFormula

__all__ = [
    "OracleLimitError",
    "MAX_VARS",
    "brute_count",
    "brute_models",
    "assignment_columns",
    "ChiSquareResult",
    "chi_square_uniform",
]

MAX_VARS = 24
_CHUNK = 1 << 16


class OracleLimitError(ValueError):
    pass


def _scope(phi: CnfFormula, scope: t.Optional[t.Iterable[int]], max_vars: int) -> t.List[int]:
    xs = sorted(set(range(1, phi.num_vars + 1)) if scope is None else set(scope))
    missing = set(phi.variables) - set(xs)
    if missing:
        raise ValueError(f"variables {sorted(missing)} are outside the scope")
    if len(xs) > max_vars:
        raise OracleLimitError(f"{len(xs)} variables exceed the oracle limit of {max_vars}")
    return xs


def assignment_columns(xs: t.Sequence[int], start: int, stop: int) -> t.Dict[int, np.ndarray]:
    """Truth columns for assignments ``start..stop-1`` over ``xs``.

    Assignment ``i`` gives ``xs[0]`` the most significant bit of ``i``, so
    increasing ``i`` is lexicographic order with false before true.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    n = len(xs)
    return {v: ((idx >> (n - 1 - j)) & 1).astype(bool) for j, v in enumerate(xs)}


def _satisfied(phi: CnfFormula, cols: t.Mapping[int, np.ndarray], size: int) -> np.ndarray:
    alive = np.ones(size, dtype=bool)
    for c in phi.clauses:
        sat = np.zeros(size, dtype=bool)
        for lit in c:
            col = cols[abs(lit)]
            sat |= col if lit > 0 else ~col
        alive &= sat
    return alive


def _chunks(n: int) -> t.Iterator[t.Tuple[int, int]]:
    total = 1 << n
    for start in range(0, total, _CHUNK):
        yield start, min(total, start + _CHUNK)


def brute_count(phi: CnfFormula, scope: t.Optional[t.Iterable[int]] = None,
                max_vars: int = MAX_VARS) -> int:
    """Count models over ``scope`` (default ``1..num_vars``) by enumeration."""
    xs = _scope(phi, scope, max_vars)
    total = 0
    for start, stop in _chunks(len(xs)):
        cols = assignment_columns(xs, start, stop)
        total += int(_satisfied(phi, cols, stop - start).sum())
    return total


def brute_models(phi: CnfFormula, scope: t.Optional[t.Iterable[int]] = None,
                 max_vars: int = MAX_VARS) -> t.List[t.Dict[int, bool]]:
    """All models over ``scope`` in lexicographic order (false < true)."""
    xs = _scope(phi, scope, max_vars)
    out = []
    for start, stop in _chunks(len(xs)):
        cols = assignment_columns(xs, start, stop)
        hits = np.flatnonzero(_satisfied(phi, cols, stop - start))
        for i in hits:
            out.append({v: bool(cols[v][i]) for v in xs})
    return out


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    critical: float
    reject: bool


def chi_square_uniform(counts: t.Sequence[int], m: t.Optional[int] = None,
                       alpha: float = 0.001) -> ChiSquareResult:
    """Pearson goodness-of-fit against the uniform distribution on ``m`` cells.

    ``counts`` may be shorter than ``m``; missing cells count as zero.
    """
    obs = np.asarray(counts, dtype=float)
    m = len(obs) if m is None else m
    if m < 2:
        raise ValueError("need at least two categories")
    if len(obs) > m:
        raise ValueError("more observed cells than categories")
    obs = np.concatenate([obs, np.zeros(m - len(obs))])
    total = obs.sum()
    if total < 10 * m:
        raise ValueError(f"{int(total)} draws are too few for {m} categories")
    expected = total / m
    stat = float(((obs - expected) ** 2).sum() / expected)
    crit = float(chi2.ppf(1 - alpha, m - 1))
    return ChiSquareResult(stat, crit, stat > crit)
