"""GNS representation of ``omega_free`` on finitely supported vectors.

Basis vectors ``|z, zt>`` are labelled by free flux pairs.  Generators act by

    pi(W(u, ut, z, zt)) |z', zt'> = e^{2 pi i sigma_free((u, ut, 0, 0), (0, 0, z + 2z', zt + 2zt'))} |z + z', zt + zt'>

and flux observables are diagonal with eigenvalue
``2 sigma~_free((r, rt, 0, 0), (0, 0, z, zt))`` (the real, unreduced pairing).
Amplitudes are kept as :class:`PhaseSum` values so that vacuum expectations
agree with ``omega_free`` exactly.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .sectors import (TopFreeElement, TopFreeGroup, _free_dims, duality_free, free_element,
                      sigma_free, sigma_free_lifted)
from .surface import SpacetimeModel
from .weyl import PhaseSum, WeylElement, _as_phasesum

Key = tuple[tuple[int, ...], tuple[int, ...]]


class GnsVector:
    """Finite combination of basis vectors ``|z, zt>``."""

    __slots__ = ("model", "amplitudes")

    def __init__(self, model: SpacetimeModel, amplitudes: Mapping | None = None):
        self.model = model
        _, _, nz, nzt = _free_dims(model)
        acc: dict = {}
        for (z, zt), a in (amplitudes or {}).items():
            key = (tuple(int(x) for x in z), tuple(int(x) for x in zt))
            if len(key[0]) != nz or len(key[1]) != nzt:
                raise ValueError(f"basis label {key} does not match {model.label()}")
            acc[key] = acc.get(key, PhaseSum()) + _as_phasesum(a)
        self.amplitudes = {k: v for k, v in acc.items() if not v.is_zero()}

    def __add__(self, o: "GnsVector") -> "GnsVector":
        self._check(o)
        acc = dict(self.amplitudes)
        for k, v in o.amplitudes.items():
            acc[k] = acc.get(k, PhaseSum()) + v
        return GnsVector(self.model, acc)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c) -> "GnsVector":
        c = _as_phasesum(c)
        return GnsVector(self.model, {k: v * c for k, v in self.amplitudes.items()})

    def _check(self, o: "GnsVector"):
        if o.model != self.model:
            raise ValueError("vectors live in different GNS spaces")

    def inner(self, o: "GnsVector") -> PhaseSum:
        """``<self | o>``, antilinear in the first slot."""
        self._check(o)
        total = PhaseSum()
        for k, v in self.amplitudes.items():
            w = o.amplitudes.get(k)
            if w is not None:
                total = total + v.conjugate() * w
        return total

    def norm2(self) -> float:
        return math.fsum(abs(v.value()) ** 2 for v in self.amplitudes.values())

    def amplitude(self, z, zt) -> complex:
        return self.amplitudes.get((tuple(z), tuple(zt)), PhaseSum()).value()

    def is_zero(self) -> bool:
        return not self.amplitudes

    def items(self):
        return sorted(self.amplitudes.items())

    def __eq__(self, o) -> bool:
        return isinstance(o, GnsVector) and o.model == self.model and o.amplitudes == self.amplitudes

    def __hash__(self):
        return hash(frozenset(self.amplitudes.items()))

    def to_json(self) -> list[dict]:
        out = []
        for (z, zt), a in self.items():
            v = a.value()
            out.append({"z": list(z), "zt": list(zt), "re": v.real, "im": v.imag})
        return out

    def __repr__(self):
        return f"GnsVector({self.model.label()}, {len(self.amplitudes)} terms)"


def vacuum(model: SpacetimeModel) -> GnsVector:
    _, _, nz, nzt = _free_dims(model)
    return GnsVector(model, {((0,) * nz, (0,) * nzt): 1})


def ket(model: SpacetimeModel, z: Sequence[int], zt: Sequence[int]) -> GnsVector:
    return GnsVector(model, {(tuple(z), tuple(zt)): 1})


def random_vector(model: SpacetimeModel, rng: random.Random, n_terms: int = 3, zmax: int = 2) -> GnsVector:
    _, _, nz, nzt = _free_dims(model)
    amps = {}
    for _ in range(n_terms):
        key = (tuple(rng.randint(-zmax, zmax) for _ in range(nz)),
               tuple(rng.randint(-zmax, zmax) for _ in range(nzt)))
        amps[key] = complex(rng.randint(-3, 3), rng.randint(-3, 3))
    return GnsVector(model, amps)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GnsOperator:
    """Either a Weyl generator (``kind='weyl'``) or a flux observable (``kind='flux'``)."""

    model: SpacetimeModel
    kind: str
    data: Any
    coefficient: Any = 1

    def apply(self, v: GnsVector) -> GnsVector:
        if v.model != self.model:
            raise ValueError(f"operator on {self.model.label()} applied to a vector of {v.model.label()}")
        if self.kind == "weyl":
            return _apply_weyl(self.data, v).scale(self.coefficient)
        if self.kind == "flux":
            return _apply_flux(self.data, v).scale(self.coefficient)
        if self.kind == "sum":
            total = GnsVector(self.model)
            for op in self.data:
                total = total + op.apply(v)
            return total
        raise ValueError(f"unknown operator kind {self.kind!r}")

    __call__ = apply


def _apply_weyl(g: TopFreeElement, v: GnsVector) -> GnsVector:
    model = v.model
    torus = free_element(model, u=g.u, ut=g.ut)
    out: dict = {}
    for (zp, ztp), a in v.amplitudes.items():
        doubled = free_element(model, z=[x + 2 * y for x, y in zip(g.z, zp)],
                               zt=[x + 2 * y for x, y in zip(g.zt, ztp)])
        phase = sigma_free(torus, doubled, model)
        key = (tuple(x + y for x, y in zip(g.z, zp)), tuple(x + y for x, y in zip(g.zt, ztp)))
        out[key] = out.get(key, PhaseSum()) + a.shift(phase.value)
    return GnsVector(model, out)


def flux_eigenvalue(model: SpacetimeModel, r: Sequence, rt: Sequence, z: Sequence[int], zt: Sequence[int]):
    """``2 sigma~_free((r, rt, 0, 0), (0, 0, z, zt))`` as an unreduced real number."""
    return 2 * sigma_free_lifted(r, rt, z, zt, model)


def _apply_flux(data, v: GnsVector) -> GnsVector:
    r, rt = data
    return GnsVector(v.model, {k: a * complex(flux_eigenvalue(v.model, r, rt, *k))
                               for k, a in v.amplitudes.items()})


def represent(a, model: SpacetimeModel | None = None) -> GnsOperator:
    """Operator of a generator (``TopFreeElement``) or of a Weyl element."""
    if isinstance(a, WeylElement):
        group = a.group
        if not isinstance(group, TopFreeGroup):
            raise ValueError("only elements of a Top_free Weyl algebra can be represented")
        return GnsOperator(group.model, "sum",
                           tuple(GnsOperator(group.model, "weyl", g, c) for g, c in a.items()))
    if model is None:
        raise ValueError("a model is required to represent a bare generator")
    if (len(a.u), len(a.ut), len(a.z), len(a.zt)) != _free_dims(model):
        raise ValueError(f"degree mismatch: generator shape does not fit {model.label()}")
    return GnsOperator(model, "weyl", a)


def apply(op: GnsOperator, v: GnsVector) -> GnsVector:
    return op.apply(v)


def phase_operator(model: SpacetimeModel, u: Sequence, ut: Sequence) -> GnsOperator:
    return represent(free_element(model, u=u, ut=ut), model)


def shift_operator(model: SpacetimeModel, z: Sequence[int], zt: Sequence[int]) -> GnsOperator:
    return represent(free_element(model, z=z, zt=zt), model)


def flux_operator(model: SpacetimeModel, r: Sequence, rt: Sequence) -> GnsOperator:
    nu, nut, _, _ = _free_dims(model)
    if len(r) != nu or len(rt) != nut:
        raise ValueError(f"flux data needs {nu} + {nut} real coordinates")
    return GnsOperator(model, "flux", (tuple(r), tuple(rt)))


def stone_phase(model: SpacetimeModel, t, r: Sequence, rt: Sequence, v: GnsVector) -> GnsVector:
    """``e^{2 pi i t P(r, rt)} v`` computed from the flux eigenvalues."""
    out = {}
    for (z, zt), a in v.amplitudes.items():
        out[(z, zt)] = a.shift(t * flux_eigenvalue(model, r, rt, z, zt))
    return GnsVector(model, out)


def duality_unitary(v: GnsVector) -> GnsVector:
    """``|z, zt> -> |zt, eps z>`` into the degree m-k space, ``eps = (-1)^{k(m-k)+1}``."""
    e = v.model.duality_sign
    return GnsVector(v.model.dual(), {(zt, tuple(e * x for x in z)): a for (z, zt), a in v.amplitudes.items()})


def vacuum_expectation(a: WeylElement) -> PhaseSum:
    """``<0,0| pi(a) |0,0>`` as an exact phase sum."""
    model = a.group.model
    vac = vacuum(model)
    return vac.inner(represent(a).apply(vac))


def annihilates_vacuum(a: WeylElement) -> bool:
    return represent(a).apply(vacuum(a.group.model)).is_zero()


# ---------------------------------------------------------------------------
# scripted demos
# ---------------------------------------------------------------------------

def _num(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


def run_script(model: SpacetimeModel, script: Sequence[Mapping]) -> dict:
    """Apply a sequence of operations to a starting vector.

    Steps are ``{"op": "start", "z": [...], "zt": [...]}``,
    ``{"op": "weyl", "u", "ut", "z", "zt"}``, ``{"op": "phase", "u", "ut"}``,
    ``{"op": "shift", "z", "zt"}``, ``{"op": "flux", "r", "rt"}`` or
    ``{"op": "duality"}``.  Rational entries may be given as strings like ``"1/4"``.
    """
    v = vacuum(model)
    log = []
    for step in script:
        op = step.get("op")
        nu, nut, nz, nzt = _free_dims(v.model)
        u = [_num(x) for x in step.get("u", [0] * nu)]
        ut = [_num(x) for x in step.get("ut", [0] * nut)]
        z = [int(x) for x in step.get("z", [0] * nz)]
        zt = [int(x) for x in step.get("zt", [0] * nzt)]
        entry: dict = {"op": op}
        if op == "start":
            v = ket(v.model, z, zt)
        elif op in ("weyl", "phase", "shift"):
            v = represent(free_element(v.model, u, ut, z, zt), v.model).apply(v)
        elif op == "flux":
            r = [_num(x) for x in step.get("r", [0] * nu)]
            rt = [_num(x) for x in step.get("rt", [0] * nut)]
            P = flux_operator(v.model, r, rt)
            n2 = v.norm2()
            if n2 > 0:
                entry["expectation"] = (v.inner(P.apply(v)).value() / n2).real
            v = P.apply(v)
        elif op == "duality":
            v = duality_unitary(v)
        else:
            raise ValueError(f"unknown script op {op!r}")
        entry["norm2"] = v.norm2()
        log.append(entry)
    return {"model": v.model.label(), "amplitudes": v.to_json(), "norm2": v.norm2(),
            "vacuum_overlap": abs(vacuum(v.model).inner(v).value()), "steps": log}
