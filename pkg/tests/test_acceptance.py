"""Acceptance criteria 1-9.  Each test prints one ``criterion N: PASS|FAIL`` line."""
import cmath
import math
import random
import time
from fractions import Fraction

import pytest

from abelian_duality import dyncyl, gns
from abelian_duality.dyncyl import CylinderDynSector, GaussianProfile, TestForm
from abelian_duality.sectors import (LiftModel, TopFreeGroup, TopTorGroup, assemble_observables, build_splitting,
                                     duality_free, duality_full, duality_tor, free_element, sigma_free, sigma_tor,
                                     solve_selfdual_chi, ObservableElement)
from abelian_duality.surface import SpacetimeModel, builtin_surface, catalog_names
from abelian_duality.weyl import (gelfand_witness, gram_positivity, is_duality_invariant, norm1, omega_free,
                                  omega_tor, omega_total, random_weyl, weyl_mul, weyl_star)

F = Fraction


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def model(name, k, m=-1):
    return SpacetimeModel(builtin_surface(name), k, m)


def all_models():
    for name in catalog_names():
        s = builtin_surface(name)
        for k in range(1, s.dim + 1):
            yield SpacetimeModel(s, k)


# 1 ---------------------------------------------------------------------------------------------

def _laws(group, exact):
    rng = random.Random(2024)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(500):
        a, b, c = (random_weyl(group, rng) for _ in range(3))
        l, r = weyl_mul(weyl_mul(a, b), c), weyl_mul(a, weyl_mul(b, c))
        s1, s2 = weyl_star(weyl_mul(a, b)), weyl_mul(weyl_star(b), weyl_star(a))
        if exact:
            ok = l == r and s1 == s2 and weyl_star(weyl_star(a)) == a
        else:
            d = max(l.distance(r), s1.distance(s2), weyl_star(weyl_star(a)).distance(a))
            worst = max(worst, d)
            ok = d <= 1e-12
        ok = ok and norm1(weyl_mul(a, b)) <= norm1(a) * norm1(b) * (1 + 1e-12)
        if not ok:
            return False, worst, time.perf_counter() - t0
    return True, worst, time.perf_counter() - t0


def test_criterion_1_weyl_laws(report):
    groups = [("Top_free", TopFreeGroup(model("torus2", 1)), True),
              ("Top_tor", TopTorGroup(model("lens(6)", 2)), True),
              ("Dyn", CylinderDynSector(), False)]
    parts, ok = [], True
    for label, g, exact in groups:
        good, worst, dt = _laws(g, exact)
        ok &= good and dt < 5.0
        parts.append(f"{label} {'exact' if exact else f'dev={worst:.1e}'} {dt:.2f}s")
    report(1, ok, "500 triples per group; " + "; ".join(parts))


# 2 ---------------------------------------------------------------------------------------------

def test_criterion_2_gram_positivity(report):
    t0 = time.perf_counter()
    cases = [(omega_free(TopFreeGroup(model("circle", 1, 2))), 1e-12),
             (omega_free(TopFreeGroup(model("torus2", 1))), 1e-12),
             (omega_tor(TopTorGroup(model("lens(6)", 2))), 1e-12),
             (dyncyl.omega_dyn(CylinderDynSector()), 1e-9)]
    rng = random.Random(0)
    ok, worst = True, {}
    for state, tol in cases:
        lo = math.inf
        for _ in range(100):
            els = [state.group.random_element(rng) for _ in range(rng.randint(8, 32))]
            lo = min(lo, gram_positivity(state, els).min_eigenvalue)
        worst[state.group.name] = lo
        ok &= lo >= -tol
    dt = time.perf_counter() - t0
    ok &= dt < 60
    detail = "; ".join(f"{k} min eig {v:.1e}" for k, v in worst.items())
    report(2, ok, f"100 families x <=32 generators per state; {detail}; {dt:.1f}s")


# 3 ---------------------------------------------------------------------------------------------

def test_criterion_3_gelfand_witness(report):
    M = model("circle", 1, 2)
    g = TopFreeGroup(M)
    state = omega_free(g)
    a = gelfand_witness(g, free_element(M, u=[F(1, 3)], z=[1]))
    v = state.exact_value(weyl_mul(weyl_star(a), a))
    ok = v.is_zero() and not a.is_zero() and gns.annihilates_vacuum(a)
    report(3, ok, f"omega_free(a*a) = {v.value()} exactly, a has {len(a.terms)} terms")


# 4 ---------------------------------------------------------------------------------------------

def test_criterion_4_cylinder_closed_form(report):
    t0 = time.perf_counter()
    worst = 0.0
    for c, s, amp in [(0.0, 0.3, 1.0), (0.4, 0.25, 1.7), (-0.8, 0.5, 0.6)]:
        rho = TestForm.cos_mode(GaussianProfile(c, s, amp), 1)
        fhat = amp * s * math.sqrt(2 * math.pi) * math.exp(-2 * math.pi ** 2 * s * s) * cmath.exp(-2j * math.pi * c)
        closed = math.pi / 2 * abs(fhat) ** 2
        mode_sum = dyncyl.two_point(rho, rho).value
        quad = dyncyl.two_point_quadrature(rho, rho)
        worst = max(worst, abs(mode_sum - closed) / closed, abs(mode_sum - quad) / closed)
    dt = time.perf_counter() - t0
    report(4, worst <= 1e-8 and dt < 10, f"max relative deviation {worst:.1e}; {dt:.2f}s")


# 5 ---------------------------------------------------------------------------------------------

def test_criterion_5_ccr(report):
    rng = random.Random(1)
    worst, paths = 0.0, 0.0
    for _ in range(50):
        a, b = dyncyl.random_test_form(rng), dyncyl.random_test_form(rng)
        anti = dyncyl.two_point(a, b).value - dyncyl.two_point(b, a).value
        tau = dyncyl.tau_dyn(a, b)
        worst = max(worst, abs(anti + 1j * tau))
        paths = max(paths, abs(tau - dyncyl.tau_dyn(a, b, method="curl")))
    report(5, worst <= 1e-8 and paths <= 1e-8,
           f"50 pairs; |antisym + i tau| <= {worst:.1e}; codifferential vs curl {paths:.1e}")


# 6 ---------------------------------------------------------------------------------------------

def test_criterion_6_gauge_and_zero_mode(report):
    rng = random.Random(6)
    worst, zero_exact = 0.0, True
    for _ in range(40):
        rho = dyncyl.random_test_form(rng)
        q = rng.randint(1, 3)
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        g = GaussianProfile(rng.uniform(-1, 1), rng.uniform(0.2, 0.6))
        for gauge in (TestForm.exact([(q, c, g), (-q, c.conjugate(), g)]),
                      TestForm.coexact([(q, c, g), (-q, c.conjugate(), g)])):
            for r in (dyncyl.two_point(gauge, rho), dyncyl.two_point(rho, gauge)):
                worst = max(worst, abs(r.value) / max(1.0, r.scale))
        static = TestForm(((rng.choice(dyncyl.COMPONENTS), 0, rng.uniform(-1, 1), g),))
        zero_exact &= dyncyl.two_point(static, rho).value == 0 and dyncyl.two_point(rho, static).value == 0
    report(6, worst <= 1e-12 and zero_exact,
           f"gauge |omega2|/scale <= {worst:.1e}; n=0 forms give exact 0: {zero_exact}")


# 7 ---------------------------------------------------------------------------------------------

def test_criterion_7_duality(report):
    rng = random.Random(7)
    pair_ok = True
    for M in all_models():
        gf, gt, D = TopFreeGroup(M), TopTorGroup(M), M.dual()
        for _ in range(20):
            a, b = gf.random_element(rng), gf.random_element(rng)
            pair_ok &= sigma_free(duality_free(a, M), duality_free(b, M), D) == sigma_free(a, b, M)
            x, y = gt.random_element(rng), gt.random_element(rng)
            pair_ok &= sigma_tor(duality_tor(x, M), duality_tor(y, M), D) == sigma_tor(x, y, M)
    for name, k in [("lens(6)", 2), ("torus3", 1), ("rp3", 2)]:
        M = model(name, k)
        lm = LiftModel.random(M, 3)
        group = assemble_observables(M, lm.dyn, build_splitting(lm))
        dual = group.dual()
        for _ in range(50):
            a, b = group.random_element(rng), group.random_element(rng)
            pair_ok &= dual.pairing(duality_full(a, M, lm.dyn), duality_full(b, M, lm.dyn)) == group.pairing(a, b)

    top_worst = 0.0
    for name, k in [("circle", 1), ("torus2", 1), ("rp3", 2), ("lens(7)", 1)]:
        M = model(name, k)
        group = assemble_observables(M, None, build_splitting(LiftModel.random(M, 0, n_dyn=0)))
        els = [group.random_element(rng) for _ in range(200)]
        top_worst = max(top_worst, is_duality_invariant(omega_total(group), omega_total(group.dual()),
                                                        group.duality, els))
    C = model("circle", 1, 2)
    dyn = CylinderDynSector()
    group = assemble_observables(C, dyn, build_splitting(LiftModel.random(C, 0, n_dyn=0)))
    dual = group.dual()
    els = [group.random_element(rng) for _ in range(200)]
    dyn_worst = is_duality_invariant(omega_total(group, dyncyl.omega_dyn(dyn)),
                                     omega_total(dual, dyncyl.omega_dyn(dual.dyn)), group.duality, els)

    gf = TopFreeGroup(C)
    unitary_ok = True
    for _ in range(50):
        x = gf.random_element(rng)
        v = gns.random_vector(C, rng)
        unitary_ok &= gns.duality_unitary(gns.represent(x, C).apply(v)) == \
            gns.represent(duality_free(x, C), C.dual()).apply(gns.duality_unitary(v))
        r, rt = x.u, x.ut
        unitary_ok &= gns.flux_operator(C.dual(), rt, [C.duality_sign * c for c in r]).apply(
            gns.duality_unitary(v)) == gns.duality_unitary(gns.flux_operator(C, r, rt).apply(v))
    ok = pair_ok and top_worst == 0 and dyn_worst <= 1e-9 and unitary_ok
    report(7, ok, f"pairings exact: {pair_ok}; topological state defect {top_worst}; "
                  f"dynamical {dyn_worst:.1e}; U_free and flux swap exact: {unitary_ok}")


# 8 ---------------------------------------------------------------------------------------------

def test_criterion_8_splitting(report):
    count, ok = 0, True
    for M in all_models():
        lm = LiftModel.random(M, 0)
        sp = build_splitting(lm)
        ok &= sp.validated and sp.chi.exact and sp.chi.residual == 0
        ok &= all(d.residual == 0 for side in sp.delta_xi + sp.delta_eta for d in side)
        ok &= all(c["pass"] and c["exact"] for c in sp.certificate())
        group = assemble_observables(M, lm.dyn, sp)
        rng = random.Random(count)
        z = lm.dyn.zero()
        for _ in range(10):
            a, b = group.random_element(rng), group.random_element(rng)
            pa = [ObservableElement(a.dyn, group.free.zero(), group.tor.zero()),
                  ObservableElement(z, a.free, group.tor.zero()), ObservableElement(z, group.free.zero(), a.tor)]
            pb = [ObservableElement(b.dyn, group.free.zero(), group.tor.zero()),
                  ObservableElement(z, b.free, group.tor.zero()), ObservableElement(z, group.free.zero(), b.tor)]
            ok &= all(lm.sigma(sp.embed(x), sp.embed(y)).is_zero()
                      for i, x in enumerate(pa) for j, y in enumerate(pb) if i != j)
        if M.m == 2 * M.k:
            r = solve_selfdual_chi(LiftModel.random(M, 0).lifts, M)
            ok &= r.validated and r.residual == 0
        count += 1
    report(8, ok, f"{count} (surface, k) models; residuals exact 0, mixed pairings 0, self-dual cases validated")


# 9 ---------------------------------------------------------------------------------------------

def test_criterion_9_gns(report):
    M = model("torus2", 1)
    g = TopFreeGroup(M)
    state = omega_free(g)
    rng = random.Random(9)
    vac_ok = all(gns.vacuum_expectation(a) == state.exact_value(a)
                 for a in (random_weyl(g, rng, n_terms=4) for _ in range(100)))
    rel_ok = True
    for _ in range(50):
        x, y = g.random_element(rng), g.random_element(rng)
        v = gns.random_vector(M, rng)
        lhs = gns.represent(x, M).apply(gns.represent(y, M).apply(v))
        rhs = gns.represent(g.add(x, y), M).apply(v).scale(
            gns.PhaseSum.phase(sigma_free(x, y, M).value))
        rel_ok &= lhs == rhs
    pairs = [(TestForm.cos_mode(GaussianProfile(c, w), n), TestForm.cos_mode(GaussianProfile(c, w), n))
             for c, w, n in [(0.0, 0.3, 1), (0.5, 0.4, 1), (-0.3, 0.25, 2)]]
    leak = dyncyl.ground_state_check(pairs)["max_negative_leak"]
    report(9, vac_ok and rel_ok and leak <= 1e-9,
           f"vacuum expectations exact: {vac_ok}; operator Weyl relations exact: {rel_ok}; leakage {leak:.1e}")
