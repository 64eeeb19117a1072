"""``adl`` command-line entry point.

Every command prints a report with its resolved configuration, a list of
checks (name, status, value, tolerance, provenance) and command-specific
results.  Exit status is 0 when every check passes, 1 when one fails and
2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
import time
from fractions import Fraction
from importlib import metadata
from typing import Any, Callable, Sequence

from . import dyncyl, gns, sectors, surface, weyl
from .fgab import CircleValue

DEFAULT_TOL = {
    "exact": 0.0,
    "gram_top": 1e-12,
    "gram_dyn": 1e-9,
    "ccr": 1e-8,
    "gauge": 1e-12,
    "hermitian": 1e-12,
    "positive_form": 1e-9,
    "duality_dyn": 1e-10,
    "ground": 1e-9,
    "translation": 1e-10,
    "oracle": 1e-8,
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, CircleValue):
        return _plain(x.value)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return _plain(x.item())
    return x


class Report:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.checks: list[dict] = []
        self.result: dict = {}

    def check(self, name: str, passed: bool, value: Any, tolerance: Any, provenance: str):
        self.checks.append({"name": name, "status": "pass" if passed else "fail",
                            "value": _plain(value), "tolerance": _plain(tolerance),
                            "provenance": provenance})

    @property
    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def as_dict(self, meta: bool) -> dict:
        out = {"command": self.command, "config": _plain(self.config),
               "checks": sorted(self.checks, key=lambda c: c["name"]),
               "result": _plain(self.result), "status": "pass" if self.ok else "fail"}
        if meta:
            try:
                version = metadata.version("artifact")
            except metadata.PackageNotFoundError:
                version = "unknown"
            out["meta"] = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                           "version": version, "python": sys.version.split()[0]}
        return out


def _emit(report: Report, args, stream) -> None:
    data = report.as_dict(not args.no_meta)
    fmt = "json" if args.json else args.format
    if fmt == "json":
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "value", "tolerance", "provenance"])
        for c in data["checks"]:
            w.writerow([c["name"], c["status"], json.dumps(c["value"]), json.dumps(c["tolerance"]), c["provenance"]])
        text = buf.getvalue()
    else:
        lines = [f"adl {report.command}"]
        for c in data["checks"]:
            lines.append(f"  [{c['status']}] {c['name']}: {c['value']} (tol {c['tolerance']}; {c['provenance']})")
        if data["result"]:
            lines.append(json.dumps(data["result"], indent=2, sort_keys=True))
        lines.append(f"status: {data['status']}")
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def _config(args) -> dict:
    skip = {"func", "json", "format", "out", "no_meta"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _tol(args, key: str) -> float:
    return DEFAULT_TOL[key] * args.tol_scale


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _surface(name: str) -> surface.SurfaceModel:
    if os.path.exists(name):
        with open(name) as fh:
            return surface.load_surface(fh.read())
    try:
        return surface.builtin_surface(name)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _model(args) -> surface.SpacetimeModel:
    s = _surface(args.surface)
    m = args.m if args.m is not None else s.dim + 1
    k = args.k if args.k is not None else 1
    try:
        return surface.SpacetimeModel(s, k, m)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _rational_matrix(rows) -> tuple:
    return tuple(tuple(Fraction(x) if isinstance(x, (str, int)) else x for x in r) for r in rows)


def _lift_model(args, model) -> sectors.LiftModel:
    if getattr(args, "lift_file", None):
        with open(args.lift_file) as fh:
            data = json.load(fh)
        lifts = sectors.LiftPairingData(_rational_matrix(data["C"]),
                                        _rational_matrix(data["self_pairings"]) if data.get("self_pairings") else None)
        return sectors.LiftModel(model, lifts, data.get("tors_lift") and _rational_matrix(data["tors_lift"]),
                                 data.get("lift_tors") and _rational_matrix(data["lift_tors"]))
    return sectors.LiftModel.random(model, args.lift_seed, n_dyn=args.dyn_samples)


def _worst(values) -> float:
    return max((float(v) for v in values), default=0.0)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_surface_list(args, rep: Report):
    rep.result["surfaces"] = surface.catalog_names()


def cmd_surface_show(args, rep: Report):
    s = _surface(args.name)
    rep.result["surface"] = s.to_json() if args.json or args.format == "json" else s.summary()
    again = surface.load_surface(s.to_json())
    rep.check("round trip", again == s, again == s, "equal", "load_surface(to_json)")


def _splitting_checks(rep: Report, model, lm: sectors.LiftModel):
    sp = sectors.build_splitting(lm)
    for c in sp.certificate():
        rep.check(c["name"], c["pass"], c["value"], 0, "lift-model recomputation, exact rationals")
    delta_res = _worst(d.residual for side in sp.delta_xi + sp.delta_eta for d in side)
    rep.check("delta residual", delta_res == 0, delta_res, 0, "sigma_free recomputation on basis fluxes")
    if model.m == 2 * model.k:
        try:
            sd = sectors.solve_selfdual_chi(lm.lifts, model)
            rep.check("self-dual residual", sd.validated, sd.residual, 0, "post-correction self pairing recomputation")
        except sectors.SplittingObstruction as e:
            rep.check("self-dual residual", False, str(e), 0, "odd-degree diagonal obstruction")
    return sp


def cmd_sectors_build(args, rep: Report):
    model = _model(args)
    lm = _lift_model(args, model)
    sp = _splitting_checks(rep, model, lm)
    nu, nut, nz, nzt = sectors._free_dims(model)
    rep.result.update({
        "model": model.label(),
        "degrees": model.degrees,
        "top_free": {"u": nu, "ut": nut, "z": nz, "zt": nzt},
        "top_tor": {"t": list(lm.ot), "tt": list(lm.ott)},
        "lift_data": {"C": lm.lifts.C, "self_pairings": lm.lifts.self_pairings},
        "chi_correction": sp.chi.chi_correction,
        "dual_basis": sp.chi.dual_basis,
        "delta_xi": [[{"u": d.u, "ut": d.ut} for d in side] for side in sp.delta_xi],
        "delta_eta": [[{"u": d.u, "ut": d.ut} for d in side] for side in sp.delta_eta],
    })


def cmd_split_check(args, rep: Report):
    model = _model(args)
    lm = _lift_model(args, model)
    sp = _splitting_checks(rep, model, lm)
    rep.result.update({"model": model.label(), "chi_residual": sp.chi.residual,
                       "residual_matrix": sp.chi.residual_matrix})
    # assembled pairing block orthogonality on random decomposed observables
    group = sectors.assemble_observables(model, lm.dyn, sp)
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.samples):
        a, b = group.random_element(rng), group.random_element(rng)
        if lm.sigma(sp.embed(a), sp.embed(b)) != group.pairing(a, b):
            bad += 1
    rep.check("sigma transported through the splitting", bad == 0, bad, 0,
              "lift-model sigma vs sigma_Dyn + sigma_free + sigma_tor")


def _sector_group(args, state: str):
    model = _model(args)
    if state == "free":
        g = sectors.TopFreeGroup(model)
        return g, weyl.omega_free(g), _tol(args, "gram_top")
    if state == "faithful":
        g = sectors.TopFreeGroup(model)
        return g, weyl.omega_free_faithful(g), _tol(args, "gram_top")
    if state == "tor":
        g = sectors.TopTorGroup(model)
        return g, weyl.omega_tor(g), _tol(args, "gram_top")
    if state == "dyn":
        g = dyncyl.CylinderDynSector(args.modes)
        return g, dyncyl.omega_dyn(g), _tol(args, "gram_dyn")
    # total: the cylinder carries a genuine dynamical sector
    cylinder = model.surface.name == "circle" and model.k == 1
    dyn = dyncyl.CylinderDynSector(args.modes) if cylinder else None
    sp = sectors.build_splitting(sectors.LiftModel.random(model, args.lift_seed, n_dyn=0))
    g = sectors.assemble_observables(model, dyn, sp)
    st = weyl.omega_total(g, dyncyl.omega_dyn(dyn) if dyn else None)
    return g, st, _tol(args, "gram_dyn" if dyn else "gram_top")


def cmd_weyl_gram(args, rep: Report):
    if not 1 <= args.n <= weyl.MAX_GRAM:
        raise UsageError(f"--n must lie in [1, {weyl.MAX_GRAM}]")
    group, state, tol = _sector_group(args, args.state)
    rng = random.Random(args.seed)
    worst, eigs = math.inf, []
    for _ in range(args.families):
        els = [group.random_element(rng) for _ in range(args.n)]
        res = weyl.gram_positivity(state, els)
        eigs.append(res.min_eigenvalue)
        worst = min(worst, res.min_eigenvalue)
    rep.check("gram min eigenvalue", worst >= -tol, worst, -tol, "numpy eigvalsh on the Gram matrix")
    rep.result.update({"group": group.name, "state": state.name, "min_eigenvalues": eigs})


def cmd_weyl_factorize(args, rep: Report):
    model = _model(args)
    g1, g2 = sectors.TopFreeGroup(model), sectors.TopTorGroup(model)
    r = weyl.tensor_factorization_check(g1, g2, args.samples, args.seed)
    for name, count in sorted(r["failures"].items()):
        rep.check(f"factorization {name}", count == 0, count, 0, "formal-sum comparison")
    rep.result.update({"group": r["group"], "samples": r["samples"]})


def _load_form(path: str) -> dyncyl.TestForm:
    with open(path) as fh:
        return dyncyl.TestForm.from_json(fh.read())


def cmd_cylinder_two_point(args, rep: Report):
    a = _load_form(args.form_a)
    b = _load_form(args.form_b) if args.form_b else a
    r = dyncyl.two_point(a, b, args.modes)
    tau = dyncyl.tau_dyn(a, b, args.modes)
    tau_curl = dyncyl.tau_dyn(a, b, args.modes, method="curl")
    rep.result.update({"omega2": r.value, "tail_bound": r.tail_bound, "quadrature_error": r.quadrature_error,
                       "scale": r.scale, "modes": r.truncation, "tau_dyn": tau})
    tol = _tol(args, "ccr") * max(1.0, abs(tau))
    rep.check("tau paths agree", abs(tau - tau_curl) <= tol, abs(tau - tau_curl), tol,
              "codifferential kernel vs curl kernel with harmonic term")
    if args.oracle:
        q = dyncyl.two_point_quadrature(a, b)
        tol = max(_tol(args, "oracle") * abs(q), r.tail_bound, 1e-15)
        rep.check("quadrature oracle", abs(q - r.value) <= tol, abs(q - r.value), tol,
                  "direct quadrature of the positive-frequency kernel")
        rep.result["oracle"] = q


def _rng_forms(seed: int, n: int, **kw) -> list[tuple[dyncyl.TestForm, dyncyl.TestForm]]:
    rng = random.Random(seed)
    return [(dyncyl.random_test_form(rng, **kw), dyncyl.random_test_form(rng, **kw)) for _ in range(n)]


def _suite_gauge(args, rep):
    rng = random.Random(args.seed)
    worst_ratio, zero_ok = 0.0, True
    for i in range(args.samples):
        rho = dyncyl.random_test_form(rng, kind="bump" if i % 2 else "gaussian")
        q = rng.randint(1, 3)
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        g = dyncyl.GaussianProfile(round(rng.uniform(-1, 1), 3), round(rng.uniform(0.2, 0.6), 3))
        ex = dyncyl.TestForm.exact([(q, c, g), (-q, c.conjugate(), g)])
        co = dyncyl.TestForm.coexact([(q, c, g), (-q, c.conjugate(), g)])
        for gauge in (ex, co):
            for r in (dyncyl.two_point(gauge, rho, args.modes), dyncyl.two_point(rho, gauge, args.modes)):
                scale = max(r.scale, 1e-300)
                worst_ratio = max(worst_ratio, abs(r.value) / scale if r.scale else abs(r.value))
        static = dyncyl.TestForm(((rng.choice(dyncyl.COMPONENTS), 0, rng.uniform(-1, 1), g),))
        zero_ok &= dyncyl.two_point(static, rho, args.modes).value == 0 and \
            dyncyl.two_point(rho, static, args.modes).value == 0
    rep.check("exact and co-exact forms", worst_ratio <= _tol(args, "gauge"), worst_ratio, _tol(args, "gauge"),
              "mode sum relative to its term-magnitude scale")
    rep.check("zero-mode forms give exactly 0", zero_ok, zero_ok, "exact", "structural absence of n = 0")


def _suite_ccr(args, rep):
    worst, worst_paths = 0.0, 0.0
    for a, b in _rng_forms(args.seed, args.samples):
        w1 = dyncyl.two_point(a, b, args.modes).value
        w2 = dyncyl.two_point(b, a, args.modes).value
        t = dyncyl.tau_dyn(a, b, args.modes)
        worst = max(worst, abs((w1 - w2) + 1j * t))
        worst_paths = max(worst_paths, abs(t - dyncyl.tau_dyn(a, b, args.modes, method="curl")))
    rep.check("antisymmetric part = -i tau", worst <= _tol(args, "ccr"), worst, _tol(args, "ccr"),
              "mode sum vs causal propagator kernel")
    rep.check("tau codifferential vs curl", worst_paths <= _tol(args, "ccr"), worst_paths, _tol(args, "ccr"),
              "two propagator formulas")


def _suite_positivity(args, rep):
    worst_neg, worst_form, worst_herm = 0.0, 0.0, 0.0
    for a, b in _rng_forms(args.seed, args.samples):
        r = dyncyl.two_point(a, a, args.modes)
        worst_neg = max(worst_neg, max(0.0, -r.value.real) / max(r.scale, 1e-300))
        worst_form = max(worst_form, abs(r.value - dyncyl.two_point_positive_form(a, args.modes)))
        worst_herm = max(worst_herm, abs(dyncyl.two_point(b, a, args.modes).value
                                         - dyncyl.two_point(a, b, args.modes).value.conjugate()))
    rep.check("omega2(rho, rho) >= 0", worst_neg <= _tol(args, "gauge"), -worst_neg, -_tol(args, "gauge"),
              "mode sum")
    rep.check("matches |.|^2 form", worst_form <= _tol(args, "positive_form"), worst_form,
              _tol(args, "positive_form"), "independent squared-modulus expansion")
    rep.check("hermiticity", worst_herm <= _tol(args, "hermitian"), worst_herm, _tol(args, "hermitian"),
              "swap of arguments")
    group = dyncyl.CylinderDynSector(args.modes)
    rng = random.Random(args.seed + 1)
    res = weyl.gram_positivity(dyncyl.omega_dyn(group), [group.random_element(rng) for _ in range(10)])
    rep.check("omega_dyn gram", res.min_eigenvalue >= -_tol(args, "gram_dyn"), res.min_eigenvalue,
              -_tol(args, "gram_dyn"), "numpy eigvalsh")


def _suite_duality(args, rep):
    worst_w, worst_t, invol = 0.0, 0.0, True
    for a, b in _rng_forms(args.seed, args.samples):
        za, zb = dyncyl.duality_dyn(a), dyncyl.duality_dyn(b)
        worst_w = max(worst_w, abs(dyncyl.two_point(za, zb, args.modes).value - dyncyl.two_point(a, b, args.modes).value))
        worst_t = max(worst_t, abs(dyncyl.tau_dyn(za, zb, args.modes) - dyncyl.tau_dyn(a, b, args.modes)))
        invol &= dyncyl.duality_dyn(za) == a
    tol = _tol(args, "duality_dyn")
    rep.check("omega2 invariant", worst_w <= tol, worst_w, tol, "mode sum before/after duality")
    rep.check("tau invariant", worst_t <= tol, worst_t, tol, "propagator kernel before/after duality")
    rep.check("duality squared = identity on 1-forms", invol, invol, "exact", "component swap")


def _suite_ground(args, rep):
    rng = random.Random(args.seed)
    pairs = []
    for _ in range(max(1, args.samples // 10)):
        f = dyncyl.GaussianProfile(round(rng.uniform(-1, 1), 3), round(rng.uniform(0.2, 0.5), 3))
        rho = dyncyl.TestForm.cos_mode(f, 1)
        pairs.append((rho, rho))
    pairs += _rng_forms(args.seed, max(1, args.samples // 10))
    r = dyncyl.ground_state_check(pairs, args.modes)
    rep.check("negative-frequency leakage", r["max_negative_leak"] <= _tol(args, "ground"), r["max_negative_leak"],
              _tol(args, "ground"), "DFT of time-translated samples")
    rep.check("time-translation invariance", r["max_translation_defect"] <= _tol(args, "translation"),
              r["max_translation_defect"], _tol(args, "translation"), "mode sum")
    rep.result["ground"] = r


SUITES: dict[str, Callable] = {"gauge": _suite_gauge, "ccr": _suite_ccr, "positivity": _suite_positivity,
                               "duality": _suite_duality, "ground": _suite_ground}


def cmd_cylinder_verify(args, rep: Report):
    for name in (SUITES if args.suite == "all" else [args.suite]):
        SUITES[name](args, rep)


def cmd_gns_demo(args, rep: Report):
    model = _model(args)
    if args.script:
        with open(args.script) as fh:
            script = json.load(fh)
    else:
        script = [{"op": "shift", "z": [1] * model.surface.betti(model.k), "zt": [0] * model.surface.betti(model.m - model.k)},
                  {"op": "phase", "u": ["1/4"] * model.surface.betti(model.k - 1),
                   "ut": [0] * model.surface.betti(model.m - model.k - 1)},
                  {"op": "duality"}]
    rep.result.update(gns.run_script(model, script))
    # vacuum consistency on random Weyl elements
    g = sectors.TopFreeGroup(model)
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.samples):
        a = weyl.random_weyl(g, rng)
        if gns.vacuum_expectation(a) != weyl.omega_free(g).exact_value(a):
            bad += 1
    rep.check("vacuum expectation = omega_free", bad == 0, bad, 0, "exact phase sums")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--json", action="store_true", help="emit JSON (same as --format json)")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    p.add_argument("--out", help="write the report to a file instead of stdout")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
    p.add_argument("--no-meta", action="store_true", help="omit timestamp and version from the report")
    return p


def _model_args(p: argparse.ArgumentParser, default_surface: str | None = None):
    p.add_argument("--surface", required=default_surface is None, default=default_surface,
                   help="catalog name or path to a surface JSON file")
    p.add_argument("--m", type=int, default=None, help="spacetime dimension (default dim+1)")
    p.add_argument("--k", type=int, default=None, help="field degree (default 1)")


def _lift_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lift-seed", type=int, default=0)
    g.add_argument("--lift-file")
    p.add_argument("--dyn-samples", type=int, default=2, help="finite dynamical samples in the lift model")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="adl", description="Abelian duality observables on finite models.")
    sub = parser.add_subparsers(dest="group", required=True)

    s = sub.add_parser("surface", help="surface catalog").add_subparsers(dest="cmd", required=True)
    s.add_parser("list", parents=[common]).set_defaults(func=cmd_surface_list)
    p = s.add_parser("show", parents=[common])
    p.add_argument("name")
    p.set_defaults(func=cmd_surface_show)

    s = sub.add_parser("sectors", help="sector construction").add_subparsers(dest="cmd", required=True)
    p = s.add_parser("build", parents=[common])
    _model_args(p)
    _lift_args(p)
    p.set_defaults(func=cmd_sectors_build)

    s = sub.add_parser("split", help="splitting certificates").add_subparsers(dest="cmd", required=True)
    p = s.add_parser("check", parents=[common])
    _model_args(p)
    _lift_args(p)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(func=cmd_split_check)

    s = sub.add_parser("weyl", help="Weyl algebra states").add_subparsers(dest="cmd", required=True)
    p = s.add_parser("gram", parents=[common])
    p.add_argument("--state", choices=("free", "faithful", "tor", "dyn", "total"), default="free")
    _model_args(p, "circle")
    p.add_argument("--n", type=int, default=16, help="generators per Gram family")
    p.add_argument("--families", type=int, default=1)
    p.add_argument("--modes", type=int, default=dyncyl.DEFAULT_MODES)
    p.add_argument("--lift-seed", type=int, default=0)
    p.set_defaults(func=cmd_weyl_gram)
    p = s.add_parser("factorize", parents=[common])
    _model_args(p, "rp3")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_weyl_factorize)

    s = sub.add_parser("cylinder", help="Lorentz cylinder dynamical sector").add_subparsers(dest="cmd", required=True)
    p = s.add_parser("two-point", parents=[common])
    p.add_argument("--form-a", required=True)
    p.add_argument("--form-b")
    p.add_argument("--modes", type=int, default=dyncyl.DEFAULT_MODES)
    p.add_argument("--oracle", action="store_true", help="also run the quadrature oracle")
    p.set_defaults(func=cmd_cylinder_two_point)
    p = s.add_parser("verify", parents=[common])
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--modes", type=int, default=dyncyl.DEFAULT_MODES)
    p.set_defaults(func=cmd_cylinder_verify)

    s = sub.add_parser("gns", help="GNS representation of omega_free").add_subparsers(dest="cmd", required=True)
    p = s.add_parser("demo", parents=[common])
    _model_args(p, "circle")
    p.add_argument("--script", help="JSON list of operations")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_gns_demo)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "modes", 1) is not None and getattr(args, "modes", 1) <= 0:
        parser.print_usage(sys.stderr)
        print("adl: error: --modes must be positive", file=sys.stderr)
        return 2
    rep = Report(f"{args.group} {args.cmd}", _config(args))
    try:
        args.func(args, rep)
    except (UsageError, surface.SurfaceValidationError, FileNotFoundError, json.JSONDecodeError) as e:
        parser.print_usage(sys.stderr)
        print(f"adl: error: {e}", file=sys.stderr)
        return 2
    _emit(rep, args, stdout)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
