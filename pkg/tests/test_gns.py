import random
from fractions import Fraction

import pytest

from abelian_duality.gns import (GnsVector, annihilates_vacuum, apply, duality_unitary, flux_eigenvalue,
                                 flux_operator, ket, phase_operator, random_vector, represent, run_script,
                                 shift_operator, stone_phase, vacuum, vacuum_expectation)
from abelian_duality.sectors import TopFreeGroup, duality_free, free_element, sigma_free
from abelian_duality.surface import SpacetimeModel, builtin_surface
from abelian_duality.weyl import (PhaseSum, WeylElement, gelfand_witness, omega_free, random_weyl, weyl_mul,
                                  weyl_star)

F = Fraction


def circle():
    return SpacetimeModel(builtin_surface("circle"), 1, 2)


MODELS = [circle(), SpacetimeModel(builtin_surface("torus2"), 1), SpacetimeModel(builtin_surface("torus3"), 2),
          SpacetimeModel(builtin_surface("torus3"), 1)]


def model_id(M):
    return M.label()


def add(g, h):
    return type(g)(tuple(a + b for a, b in zip(g.u, h.u)), tuple(a + b for a, b in zip(g.ut, h.ut)),
                   tuple(a + b for a, b in zip(g.z, h.z)), tuple(a + b for a, b in zip(g.zt, h.zt)))


def test_phase_operator_example():
    M = circle()
    v = phase_operator(M, [F(1, 4)], [0]).apply(ket(M, [0], [1]))
    # sigma_free((1/4, 0, 0, 0), (0, 0, 0, 2)) = 1/2 on the circle
    assert sigma_free(free_element(M, u=[F(1, 4)]), free_element(M, zt=[2]), M).value == F(1, 2)
    assert v.amplitudes[((0,), (1,))].phases() == {F(1, 2): 1}
    assert abs(v.amplitude([0], [1]) + 1) <= 1e-15


def test_shift_operator_example():
    M = circle()
    assert shift_operator(M, [1], [0]).apply(vacuum(M)) == ket(M, [1], [0])


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_vacuum_expectation_is_omega_free(M):
    g = TopFreeGroup(M)
    state = omega_free(g)
    rng = random.Random(17)
    for _ in range(100):
        a = random_weyl(g, rng, n_terms=4)
        assert vacuum_expectation(a) == state.exact_value(a)
        aa = weyl_mul(weyl_star(a), a)
        val = vacuum_expectation(aa)
        assert val == state.exact_value(aa)
        assert val.value().real >= -1e-12


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_operator_weyl_relations(M):
    g = TopFreeGroup(M)
    rng = random.Random(23)
    for _ in range(100):
        x, y = g.random_element(rng), g.random_element(rng)
        v = random_vector(M, rng)
        lhs = represent(x, M).apply(represent(y, M).apply(v))
        rhs = represent(add(x, y), M).apply(v).scale(PhaseSum.phase(sigma_free(x, y, M).value))
        assert lhs == rhs


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_represent_is_multiplicative_on_elements(M):
    g = TopFreeGroup(M)
    rng = random.Random(29)
    for _ in range(30):
        a, b = random_weyl(g, rng), random_weyl(g, rng)
        v = random_vector(M, rng)
        assert represent(weyl_mul(a, b)).apply(v) == represent(a).apply(represent(b).apply(v))


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_generators_are_unitary(M):
    g = TopFreeGroup(M)
    rng = random.Random(31)
    for _ in range(50):
        op = represent(g.random_element(rng), M)
        v, w = random_vector(M, rng), random_vector(M, rng)
        assert op.apply(v).inner(op.apply(w)) == v.inner(w)


def test_gelfand_witness_annihilates_vacuum():
    M = circle()
    g = TopFreeGroup(M)
    a = gelfand_witness(g, free_element(M, u=[F(1, 3)]))
    assert not a.is_zero()
    assert annihilates_vacuum(a)
    assert vacuum_expectation(weyl_mul(weyl_star(a), a)).is_zero()


def test_flux_eigenvalue_example():
    M = circle()
    P = flux_operator(M, [0], [F(1, 2)])
    for z in range(-3, 4):
        for zt in range(-2, 3):
            assert flux_eigenvalue(M, [0], [F(1, 2)], [z], [zt]) == z
            v = ket(M, [z], [zt])
            assert P.apply(v) == v.scale(z)


def test_flux_zero_operator():
    M = circle()
    rng = random.Random(2)
    for _ in range(10):
        assert flux_operator(M, [0], [0]).apply(random_vector(M, rng)).is_zero()


def test_flux_wrong_shape():
    with pytest.raises(ValueError):
        flux_operator(circle(), [0, 1], [0])


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_stone_consistency(M):
    rng = random.Random(37)
    g = TopFreeGroup(M)
    for _ in range(10):
        x = g.random_element(rng)
        r, rt = x.u, x.ut
        v = random_vector(M, rng)
        for t in (F(0), F(1, 7), F(1, 3)):
            phi = phase_operator(M, [t * c for c in r], [t * c for c in rt])
            assert phi.apply(v) == stone_phase(M, t, r, rt, v)


def test_duality_unitary_example():
    M = circle()
    u = duality_unitary(ket(M, [1], [0]))
    assert u == ket(M.dual(), [0], [1])
    assert M.duality_sign == 1


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_duality_unitary_preserves_norm(M):
    rng = random.Random(41)
    for _ in range(20):
        v, w = random_vector(M, rng), random_vector(M, rng)
        assert duality_unitary(v).inner(duality_unitary(w)) == v.inner(w)
        assert duality_unitary(v).norm2() == pytest.approx(v.norm2(), rel=1e-15)


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_duality_intertwining(M):
    g = TopFreeGroup(M)
    rng = random.Random(43)
    for _ in range(50):
        x = g.random_element(rng)
        v = random_vector(M, rng)
        lhs = duality_unitary(represent(x, M).apply(v))
        rhs = represent(duality_free(x, M), M.dual()).apply(duality_unitary(v))
        assert lhs == rhs


@pytest.mark.parametrize("M", MODELS, ids=model_id)
def test_flux_swap(M):
    g = TopFreeGroup(M)
    e = M.duality_sign
    rng = random.Random(47)
    for _ in range(20):
        x = g.random_element(rng)
        r, rt = x.u, x.ut
        v = random_vector(M, rng)
        lhs = flux_operator(M.dual(), rt, [e * c for c in r]).apply(duality_unitary(v))
        rhs = duality_unitary(flux_operator(M, r, rt).apply(v))
        assert lhs == rhs


def test_degree_mismatch():
    M = circle()
    other = TopFreeGroup(SpacetimeModel(builtin_surface("torus2"), 1))
    x = other.random_element(random.Random(0))
    with pytest.raises(ValueError):
        represent(x, M)
    with pytest.raises(ValueError):
        represent(free_element(M), None)
    with pytest.raises(ValueError):
        apply(represent(free_element(M), M), ket(MODELS[1], [0, 0], [0]))


def test_vector_basics():
    M = circle()
    v = GnsVector(M, {((1,), (0,)): 2, ((0,), (1,)): 1j})
    assert v.norm2() == 5
    assert (v - v).is_zero()
    with pytest.raises(ValueError):
        GnsVector(M, {((1, 2), (0,)): 1})


def test_script():
    M = circle()
    out = run_script(M, [{"op": "shift", "z": [1]}, {"op": "phase", "u": ["1/4"]},
                         {"op": "flux", "r": [0], "rt": ["1/2"]}, {"op": "duality"}])
    assert out["amplitudes"] == [{"z": [0], "zt": [1], "re": 1.0, "im": 0.0}]
    assert out["steps"][2]["expectation"] == 1.0
    assert out["vacuum_overlap"] == 0
    with pytest.raises(ValueError):
        run_script(M, [{"op": "teleport"}])


def test_weyl_element_representation_requires_free_group():
    from abelian_duality.sectors import TopTorGroup
    g = TopTorGroup(SpacetimeModel(builtin_surface("rp3"), 2))
    with pytest.raises(ValueError):
        represent(WeylElement.unit(g))
