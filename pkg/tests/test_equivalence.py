import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccdd.equivalence import (
    ContradictionError,
    EquivalenceSystem,
    construct_core,
    detect_lit_equ,
    prime,
)
from ccdd.formula import CnfFormula, evaluate
from ccdd.generators import random_cnf
from ccdd.oracle import assignment_columns, brute_count, brute_models

lits = st.integers(1, 8).flatmap(lambda v: st.sampled_from([v, -v]))


def system_of(pairs):
    return EquivalenceSystem.from_pairs(pairs)


class TestUnionFind:
    def test_substitution_prime(self):
        equs = prime(system_of([(-1, 3), (-4, 3), (-2, -6), (5, 5)]))
        assert equs == [(1, -3), (1, 4), (2, 6)]

    def test_empty(self):
        assert prime(EquivalenceSystem()) == []

    def test_min_variable_leads(self):
        assert prime(system_of([(2, 1)])) == [(1, 2)]

    def test_contradiction(self):
        s = system_of([(1, 2), (2, -1)])
        assert s.contradiction
        with pytest.raises(ContradictionError):
            prime(s)

    @given(st.lists(st.tuples(lits, lits), max_size=12))
    def test_negation_symmetry(self, pairs):
        s = system_of(pairs)
        for v in range(1, 9):
            assert s.find(-v) == -s.find(v)
            assert abs(s.find(v)) <= v

    @given(st.lists(st.tuples(lits, lits), max_size=12))
    def test_prime_is_idempotent(self, pairs):
        s = system_of(pairs)
        if s.contradiction:
            return
        equs = prime(s)
        assert prime(system_of(equs)) == equs
        rights = [abs(l) for _, l in equs]
        assert len(rights) == len(set(rights))
        assert all(x < abs(l) for x, l in equs)

    @given(st.lists(st.tuples(lits, lits), max_size=12))
    def test_prime_preserves_closure(self, pairs):
        s = system_of(pairs)
        if s.contradiction:
            return
        t = system_of(prime(s))
        for v in range(1, 9):
            for w in range(1, 9):
                # same class with the same relative polarity
                assert (s.find(v) == s.find(w)) == (t.find(v) == t.find(w))
                assert (s.find(v) == -s.find(w)) == (t.find(v) == -t.find(w))


class TestDetect:
    def test_binary_equivalence(self):
        s = detect_lit_equ(CnfFormula.from_clauses([[-1, 2], [1, -2]]))
        assert s.classes() == [[1, 2]]

    def test_no_implications(self):
        assert detect_lit_equ(CnfFormula.from_clauses([[1, 2]])).classes() == []

    def test_subst(self, subst):
        assert prime(detect_lit_equ(subst)) == [(1, -3), (1, 4), (2, 6)]

    def test_parity(self, parity):
        assert prime(detect_lit_equ(parity)) == [(1, -4), (2, -5)]

    def test_forced_literal(self):
        # -1 propagates 2 and -2
        s = detect_lit_equ(CnfFormula.from_clauses([[1, 2], [1, -2], [2, 3, 4]]))
        assert 1 in s.forced


class TestConstructCore:
    def test_subst(self, subst):
        res = construct_core(subst, prime(detect_lit_equ(subst)))
        assert res.core.clauses == ((1, 7),)
        assert res.equivalences == [(1, -3), (1, 4), (2, 6)]

    def test_identity(self):
        phi = CnfFormula.from_clauses([[1, 2], [2, 1], [-1, 3]])
        res = construct_core(phi, [])
        assert res.core.clauses == ((1, 2), (-1, 3))

    def test_parity_core(self, parity):
        res = construct_core(parity, [(1, -4), (2, -5)])
        assert set(res.core.variables) == {1, 2, 3}
        odd = [m for m in brute_models(res.core, [1, 2, 3])]
        assert sorted(tuple(m.values()) for m in odd) == sorted(
            bits for bits in [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
            if (bits[0] ^ bits[1] ^ bits[2]) == 1)

    def test_rejects_degenerate(self):
        with pytest.raises(ContradictionError):
            construct_core(CnfFormula.from_clauses([[1, 2]]), [(1, -1)])


def _kernelization_cases(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(4, 12)
        phi = random_cnf(rng, n, rng.randint(n // 2, 3 * n), (2, 2, 3))
        s = detect_lit_equ(phi)
        if s.contradiction:
            continue
        equs = prime(s)
        if equs:
            out.append((phi, equs))
    return out


@pytest.mark.parametrize("phi,equs", _kernelization_cases(40, seed=11))
def test_semantic_and_count_preservation(phi, equs):
    res = construct_core(phi, equs)
    rights = {abs(l) for _, l in equs}
    assert not rights & set(res.core.variables)
    xs = list(range(1, phi.num_vars + 1))
    cols = assignment_columns(xs, 0, 1 << len(xs))
    for i in range(1 << len(xs)):
        w = {v: bool(cols[v][i]) for v in xs}
        both = evaluate(res.core, w) and all(w[x] == (w[abs(l)] == (l > 0)) for x, l in equs)
        assert both == evaluate(phi, w)
    assert brute_count(phi) * 2 ** len(equs) == brute_count(res.core, xs)
