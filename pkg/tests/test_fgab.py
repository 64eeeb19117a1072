import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from abelian_duality.fgab import (CircleValue, FgAbGroup, determinant, free_torsion_split, invariant_factors,
                                  matmul, pontryagin_pair, smith_normal_form)


def _sympy_factors(m):
    S = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    return sorted(abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0)


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_sympy_and_is_unimodular(m):
    U, S, V = smith_normal_form(m)
    assert matmul(matmul(U, m), V) == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    d = invariant_factors(S)
    assert sorted(d) == _sympy_factors(m)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@pytest.mark.parametrize("m, expect", [
    ([[2, 0], [0, 3]], [[1, 0], [0, 6]]),
    ([[0, 0], [0, 0]], [[0, 0], [0, 0]]),
    ([[1]], [[1]]),
])
def test_snf_examples(m, expect):
    U, S, V = smith_normal_form(m)
    assert S == expect
    if not any(any(r) for r in m):
        assert U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]


def test_snf_deterministic():
    m = [[4, 6, 2], [6, 9, 3], [2, 3, 7]]
    assert smith_normal_form(m) == smith_normal_form([row[:] for row in m])


def test_free_torsion_split_examples():
    g = FgAbGroup.from_invariants([2], 1)
    free, tor, sec = free_torsion_split(g)
    assert free.free_rank == 1 and not free.torsion_factors
    assert tor.torsion_factors == (2,) and tor.free_rank == 0
    assert sec(free.element([3])).coords == (0, 3)

    free, tor, sec = free_torsion_split(FgAbGroup.from_invariants([6]))
    assert free.rank == 0 and tor.torsion_factors == (6,)

    g = FgAbGroup.from_presentation([[2, 0], [0, 3]])
    assert g.free_rank == 0 and g.torsion_factors == (6,)


def test_group_element_arithmetic_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        m = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(2)]
        g = FgAbGroup.from_presentation(m, 3)
        x = [rng.randint(-5, 5) for _ in range(3)]
        e = g.from_generators(x)
        back = g.from_generators(g.to_generators(e))
        assert back == e
        assert (e + (-e)).is_zero()


@pytest.mark.parametrize("u, z, expect", [
    ([Fraction(1, 4)], [1], Fraction(1, 4)),
    ([0], [5], 0),
    ([Fraction(1, 2)], [2], 0),
])
def test_pontryagin_pair_examples(u, z, expect):
    assert pontryagin_pair(u, z, [[1]]) == CircleValue.of(Fraction(expect))


def test_pontryagin_dimension_mismatch():
    with pytest.raises(ValueError):
        pontryagin_pair([Fraction(1, 2), 0], [1], [[1]])


def test_circle_value_exact_and_float():
    a = CircleValue.of(Fraction(7, 4))
    assert a.value == Fraction(3, 4) and a.exact
    assert CircleValue.of(0.9999999999999) == CircleValue.of(0.0)
    assert CircleValue.of(Fraction(1, 3)) + CircleValue.of(Fraction(2, 3)) == CircleValue.zero()
    with pytest.raises(ValueError):
        CircleValue(0.1, exact=False, tol=1e-3)
