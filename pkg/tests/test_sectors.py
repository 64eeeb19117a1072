import dataclasses
import itertools
import random
from fractions import Fraction

import pytest

from abelian_duality.fgab import CircleValue
from abelian_duality.sectors import (FiniteDynSector, InconsistentCharacterError, LiftModel, LiftPairingData,
                                     ObservableElement, SplittingError, SplittingObstruction, TopFreeGroup,
                                     TopTorGroup, assemble_observables, build_splitting, duality_free,
                                     duality_full, duality_tor, free_element, sigma_free, sigma_tor,
                                     solve_chi_splitting, solve_delta_corrections, solve_selfdual_chi, tor_element)
from abelian_duality.surface import SpacetimeModel, builtin_surface, catalog_names

F = Fraction


def all_models():
    for name in catalog_names():
        s = builtin_surface(name)
        for k in range(1, s.dim + 1):
            yield SpacetimeModel(s, k)


MODELS = list(all_models())
IDS = [m.label() for m in MODELS]


def circle():
    return SpacetimeModel(builtin_surface("circle"), 1, 2)


def rp3():
    return SpacetimeModel(builtin_surface("rp3"), 2, 4)


def sigma_free_oracle(a, b, model):
    """Matrix form written out entry by entry, reduced at the end."""
    s = model.surface
    k, m = model.k, model.m
    P1 = s.pairing(m - k - 1, k)
    P2 = s.pairing(k - 1, m - k)
    sign = (-1) ** (k * (m - k))

    def form(x, P, y):
        return sum((F(x[i]) * P[i][j] * y[j] for i in range(len(x)) for j in range(len(y))), F(0))

    v = form(a.ut, P1, b.z) - sign * form(a.u, P2, b.zt) - form(b.ut, P1, a.z) + sign * form(b.u, P2, a.zt)
    return CircleValue.of(v)


# --- sigma_free / sigma_tor ---------------------------------------------------------------------

def test_sigma_free_circle_examples():
    M = circle()
    a = free_element(M, u=[F(1, 4)])
    b = free_element(M, zt=[1])
    assert sigma_free(a, b, M) == CircleValue.of(F(1, 4))
    assert sigma_free(a, a, M) == CircleValue.zero()
    a = free_element(M, ut=[F(1, 3)])
    b = free_element(M, z=[1])
    assert sigma_free(a, b, M) == CircleValue.of(F(1, 3))


@pytest.mark.parametrize("model", MODELS, ids=IDS)
def test_sigma_free_against_oracle_and_antisymmetry(model):
    g = TopFreeGroup(model)
    rng = random.Random(11)
    for _ in range(500):
        a, b, c = g.random_element(rng), g.random_element(rng), g.random_element(rng)
        v = sigma_free(a, b, model)
        assert v == sigma_free_oracle(a, b, model)
        assert v == -sigma_free(b, a, model)
        assert sigma_free(a + c, b, model) == v + sigma_free(c, b, model)


@pytest.mark.parametrize("model", MODELS, ids=IDS)
def test_sigma_free_nondegenerate_on_grid(model):
    g = TopFreeGroup(model)
    nu, nut = len(g.zero().u), len(g.zero().ut)
    nz, nzt = len(g.zero().z), len(g.zero().zt)
    fluxes = [free_element(model, z=[int(i == j) for j in range(nz)]) for i in range(nz)] + \
             [free_element(model, zt=[int(i == j) for j in range(nzt)]) for i in range(nzt)]
    tori = [free_element(model, u=[F(1, 5) * (i == j) for j in range(nu)]) for i in range(nu)] + \
           [free_element(model, ut=[F(1, 5) * (i == j) for j in range(nut)]) for i in range(nut)]
    vals = [F(n, 6) for n in range(6)]
    for u in itertools.product(vals, repeat=min(nu + nut, 3)):
        u = list(u) + [F(0)] * (nu + nut - len(u))
        a = free_element(model, u=u[:nu], ut=u[nu:])
        if a.is_zero():
            continue
        assert any(not sigma_free(a, f, model).is_zero() for f in fluxes)
    for z in itertools.product(range(-2, 3), repeat=min(nz + nzt, 3)):
        z = list(z) + [0] * (nz + nzt - len(z))
        a = free_element(model, z=z[:nz], zt=z[nz:])
        if a.is_zero():
            continue
        assert any(not sigma_free(t, a, model).is_zero() for t in tori)


def test_sigma_tor_examples():
    M = rp3()
    a, b = tor_element(M, [1], [0]), tor_element(M, [0], [1])
    assert sigma_tor(a, b, M) == CircleValue.of(F(1, 2))
    assert sigma_tor(a, a, M) == CircleValue.zero()
    T = SpacetimeModel(builtin_surface("torus2"), 1)
    g = TopTorGroup(T)
    rng = random.Random(0)
    assert all(sigma_tor(g.random_element(rng), g.random_element(rng), T).is_zero() for _ in range(20))


@pytest.mark.parametrize("model", [m for m in MODELS if m.surface.name.startswith(("lens", "rp3"))],
                         ids=lambda m: m.label())
def test_sigma_tor_antisymmetric_nondegenerate(model):
    g = TopTorGroup(model)
    ot, ott = len(g.zero().t), len(g.zero().tt)
    elements = [tor_element(model, t, tt) for t in itertools.product(*[range(d) for d in g.zero().orders[0]])
                for tt in itertools.product(*[range(d) for d in g.zero().orders[1]])] if (ot or ott) else []
    for a in elements:
        for b in elements:
            assert sigma_tor(a, b, model) == -sigma_tor(b, a, model)
        if not a.is_zero():
            assert any(not sigma_tor(a, b, model).is_zero() for b in elements)


# --- duality ----------------------------------------------------------------------------------

def test_duality_free_circle():
    M = circle()
    a = free_element(M, u=[F(1, 4)], z=[1])
    b = duality_free(a, M)
    assert (b.u, b.ut, b.z, b.zt) == ((0,), (F(1, 4),), (0,), (1,))
    assert duality_free(b, M.dual()) == a
    assert duality_free(free_element(M), M).is_zero()


@pytest.mark.parametrize("model", MODELS, ids=IDS)
def test_duality_preserves_pairings(model):
    gf, gt = TopFreeGroup(model), TopTorGroup(model)
    D = model.dual()
    e = model.duality_sign
    rng = random.Random(5)
    for _ in range(200):
        a, b = gf.random_element(rng), gf.random_element(rng)
        assert sigma_free(duality_free(a, model), duality_free(b, model), D) == sigma_free(a, b, model)
        assert duality_free(duality_free(a, model), D) == a * e
        x, y = gt.random_element(rng), gt.random_element(rng)
        assert sigma_tor(duality_tor(x, model), duality_tor(y, model), D) == sigma_tor(x, y, model)


def test_duality_tor_rp3():
    M = rp3()
    assert duality_tor(tor_element(M, [1], [0]), M) == tor_element(M, [0], [1])
    assert duality_tor(tor_element(M), M).is_zero()


def test_duality_full_preserves_total_pairing():
    M = SpacetimeModel(builtin_surface("lens(6)"), 2)
    lm = LiftModel.random(M, 3)
    group = assemble_observables(M, lm.dyn, build_splitting(lm))
    dual = group.dual()
    rng = random.Random(2)
    for _ in range(100):
        a, b = group.random_element(rng), group.random_element(rng)
        za, zb = duality_full(a, M, lm.dyn), duality_full(b, M, lm.dyn)
        assert dual.pairing(za, zb) == group.pairing(a, b)


# --- splitting ----------------------------------------------------------------------------------

def test_chi_zero_lifts():
    M = SpacetimeModel(builtin_surface("torus2"), 1)
    r = solve_chi_splitting(LiftPairingData(((0, 0),)), M)
    assert all(x == 0 for row in r.chi_correction for x in row)
    assert r.validated and r.residual == 0


def test_chi_circle_examples():
    M = circle()
    r = solve_chi_splitting(LiftPairingData(((F(3, 10),),)), M)
    assert r.chi_correction == ((F(3, 10),),) and r.residual == 0 and r.validated
    r = solve_chi_splitting(LiftPairingData(((0.3,),)), M)
    assert abs(r.chi_correction[0][0] - 0.3) < 1e-15 and r.validated


def test_chi_torus2_random_exact():
    M = SpacetimeModel(builtin_surface("torus2"), 1, 3)
    rng = random.Random(7)
    C = (tuple(F(rng.randrange(24), 24) for _ in range(2)),)
    r = solve_chi_splitting(LiftPairingData(C), M)
    assert r.exact and all(v == CircleValue.zero() for row in r.residual_matrix for v in row)


@pytest.mark.parametrize("model", MODELS, ids=IDS)
@pytest.mark.parametrize("seed", [0, 1, 7])
def test_splitting_certificate_catalog(model, seed):
    lm = LiftModel.random(model, seed)
    sp = build_splitting(lm)
    assert sp.validated
    assert sp.chi.exact and sp.chi.residual == 0
    for check in sp.certificate():
        assert check["pass"] and check["exact"], check
    for side in sp.delta_xi + sp.delta_eta:
        for d in side:
            assert d.residual == 0


@pytest.mark.parametrize("model", MODELS, ids=IDS)
def test_assembled_pairing_is_transported(model):
    lm = LiftModel.random(model, 4)
    sp = build_splitting(lm)
    group = assemble_observables(model, lm.dyn, sp)
    rng = random.Random(9)
    zero_dyn = lm.dyn.zero()
    for _ in range(40):
        a, b = group.random_element(rng), group.random_element(rng)
        assert lm.sigma(sp.embed(a), sp.embed(b)) == group.pairing(a, b)
        # mixed sectors pair to zero after the splitting
        parts_a = [ObservableElement(a.dyn, group.free.zero(), group.tor.zero()),
                   ObservableElement(zero_dyn, a.free, group.tor.zero()),
                   ObservableElement(zero_dyn, group.free.zero(), a.tor)]
        parts_b = [ObservableElement(b.dyn, group.free.zero(), group.tor.zero()),
                   ObservableElement(zero_dyn, b.free, group.tor.zero()),
                   ObservableElement(zero_dyn, group.free.zero(), b.tor)]
        for i, x in enumerate(parts_a):
            for j, y in enumerate(parts_b):
                if i != j:
                    assert lm.sigma(sp.embed(x), sp.embed(y)).is_zero()
        assert group.pairing(a, a).is_zero()


@pytest.mark.parametrize("model", [m for m in MODELS if m.m == 2 * m.k], ids=lambda m: m.label())
@pytest.mark.parametrize("seed", [0, 3])
def test_selfdual_splitting(model, seed):
    lifts = LiftModel.random(model, seed).lifts
    r = solve_selfdual_chi(lifts, model)
    assert r.self_dual and r.validated and r.residual == 0


def test_selfdual_zero_and_wrong_degree():
    M = SpacetimeModel(builtin_surface("torus3"), 2)
    r = solve_selfdual_chi(LiftPairingData(((0,) * 3,) * 3, ((0,) * 3,) * 3), M)
    assert all(x == 0 for row in r.chi_correction for x in row) and r.validated
    with pytest.raises(SplittingError):
        solve_selfdual_chi(LiftPairingData(((0,),), ((0,),)), SpacetimeModel(builtin_surface("s1xs2"), 1))


def test_selfdual_circle_half_is_obstructed():
    # In odd degree the self pairing of h + fl(x) equals that of h for every flat x,
    # so a diagonal entry 1/2 cannot be corrected.  Brute-force check over a grid.
    M = circle()
    from abelian_duality.fgab import pontryagin_pair
    P = M.surface.pairing(0, 1)
    c = F(1, 2)
    for n in range(48):
        x = [F(n, 48)]
        after = CircleValue.of(c) + pontryagin_pair(x, [1], P) - pontryagin_pair(x, [1], P)
        assert after == CircleValue.of(F(1, 2))
    with pytest.raises(SplittingObstruction):
        solve_selfdual_chi(LiftPairingData(((0,),), ((F(1, 2),),)), M)


def test_selfdual_even_degree_half_is_corrected():
    M = SpacetimeModel(builtin_surface("torus3"), 2)
    c = ((F(1, 2), F(1, 3), 0), (F(1, 3), F(1, 5), 0), (0, 0, F(7, 8)))
    r = solve_selfdual_chi(LiftPairingData(((0,) * 3,) * 3, c), M)
    assert r.validated


# --- Delta corrections --------------------------------------------------------------------------

def test_delta_examples():
    M = circle()
    out = solve_delta_corrections({"zero": {((1,), (0,)): 0, ((0,), (1,)): 0},
                                   "fifth": {((1,), (0,)): F(1, 5), ((0,), (1,)): 0}}, M)
    assert out["zero"].u == (0,) and out["zero"].ut == (0,)
    assert out["fifth"].ut == (F(1, 5),) and out["fifth"].u == (0,) and out["fifth"].residual == 0


def test_delta_torus2_random():
    M = SpacetimeModel(builtin_surface("torus2"), 1)
    rng = random.Random(1)
    ch = {((1, 0), (0,)): F(rng.randrange(30), 30), ((0, 1), (0,)): F(rng.randrange(30), 30),
          ((0, 0), (1,)): F(rng.randrange(30), 30)}
    d = solve_delta_corrections({0: ch}, M)[0]
    sol = free_element(M, u=d.u, ut=d.ut)
    for (z, zt), v in ch.items():
        assert sigma_free(sol, free_element(M, z=z, zt=zt), M) == CircleValue.of(v)
    assert d.residual == 0


def test_delta_inconsistent_character():
    M = circle()
    with pytest.raises(InconsistentCharacterError):
        solve_delta_corrections({0: {((1,), (0,)): F(1, 5), ((0,), (1,)): 0, ((2,), (0,)): F(1, 3)}}, M)


# --- assembly -----------------------------------------------------------------------------------

def test_assemble_requires_validated_splitting():
    M = SpacetimeModel(builtin_surface("torus2"), 1)
    with pytest.raises(SplittingError):
        assemble_observables(M, None, None)
    r = solve_chi_splitting(LiftPairingData(((F(1, 3), 0),)), M)
    bad = dataclasses.replace(r, residual_matrix=((CircleValue.of(F(1, 3)), CircleValue.zero()),),
                              residual=1 / 3)
    with pytest.raises(SplittingError):
        assemble_observables(M, None, bad)


def test_assembled_pure_sectors_pair_trivially():
    M = SpacetimeModel(builtin_surface("lens(4)"), 2)
    lm = LiftModel.random(M, 0)
    group = assemble_observables(M, lm.dyn, build_splitting(lm))
    dyn = FiniteDynSector(lm.dyn.S, lm.dyn.n, lm.dyn.nt)
    d = dyn.element([1, 2], [F(1, 3), 0])
    f = group.free.element(u=[], ut=[], z=[], zt=[])
    pure_dyn = group.element(dyn=d)
    pure_tor = group.element(tor=tor_element(M, [1], [3]))
    pure_free = group.element(free=f)
    assert group.pairing(pure_dyn, pure_tor).is_zero()
    assert group.pairing(pure_tor, pure_free).is_zero()
    assert group.pairing(pure_dyn, pure_dyn).is_zero()
