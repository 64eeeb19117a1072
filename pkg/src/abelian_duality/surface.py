"""Cohomology models of compact oriented Cauchy surfaces.

A :class:`SurfaceModel` stores, per degree, the integral cohomology group of
the surface, the integer cup-product matrices between complementary degrees
evaluated on the fundamental class, and the torsion linking form.

Builtin generators
------------------
circle   H^0 = Z<1>, H^1 = Z<a>, with a the dual of the fundamental cycle.
torus2   H^1 = Z<a, b> (duals of the two circle factors), H^2 = Z<ab>.
torus3   H^1 = Z<a1, a2, a3>, H^2 = Z<a2a3, a3a1, a1a2>, H^3 = Z<a1a2a3>.
sphere2  H^0 = Z<1>, H^2 = Z<vol>.
s1xs2    H^1 = Z<a> from S^1, H^2 = Z<b> from S^2, H^3 = Z<ab>.
lens(p)  L(p,1): H^2 = Z/p generated by the dual of the 2-cell of the
         standard CW structure, H^3 = Z; linking form [[1/p]].
rp3      lens(2).

In every model the first generator of H^0 is the unit class, and the top
class evaluates to +1 on the fundamental class for the positive orientation.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Mapping, Sequence

import jsonschema

from .fgab import FgAbGroup, determinant, transpose

Matrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


class SurfaceValidationError(ValueError):
    """Raised when a surface model violates one of its structural invariants."""


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    dim: int
    cohomology: tuple[FgAbGroup, ...]
    cup: tuple[tuple[tuple[int, int], Matrix], ...]
    link: tuple[tuple[int, RatMatrix], ...] = ()
    orientation: int = 1

    def __post_init__(self):
        if self.dim < 0:
            raise SurfaceValidationError("dimension must be non-negative")
        if len(self.cohomology) != self.dim + 1:
            raise SurfaceValidationError(f"need cohomology in degrees 0..{self.dim}")
        if self.orientation not in (1, -1):
            raise SurfaceValidationError("orientation must be +1 or -1")
        object.__setattr__(self, "cup", self._complete_cup(dict(self.cup)))
        object.__setattr__(self, "link", self._complete_link(dict(self.link)))
        object.__setattr__(self, "_memo", {})

    # accessors ---------------------------------------------------------------
    def group(self, p: int) -> FgAbGroup:
        if 0 <= p <= self.dim:
            return self.cohomology[p]
        return FgAbGroup.from_invariants((), 0)

    def betti(self, p: int) -> int:
        return self.group(p).free_rank

    @property
    def real_cohomology_rank(self) -> tuple[int, ...]:
        return tuple(g.free_rank for g in self.cohomology)

    def torsion(self, p: int) -> tuple[int, ...]:
        return self.group(p).torsion_factors

    def cup_matrix(self, p: int, q: int) -> Matrix:
        """Cup matrix for the positive orientation."""
        if p + q != self.dim:
            raise ValueError(f"cup pairing needs p + q = {self.dim}")
        return dict(self.cup)[(p, q)]

    def pairing(self, p: int, q: int) -> Matrix:
        """``(e_i cup e_j)[Sigma]`` including the orientation sign."""
        key = ("pairing", p, q)
        if key not in self._memo:
            c = self.cup_matrix(p, q)
            if self.orientation == -1:
                c = tuple(tuple(-x for x in row) for row in c)
            self._memo[key] = c
        return self._memo[key]

    def link_matrix(self, p: int) -> RatMatrix:
        """Stored linking matrix between torsion of degree p and dim+1-p."""
        q = self.dim + 1 - p
        d = dict(self.link)
        if p in d:
            return d[p]
        return tuple(tuple(Fraction(0) for _ in self.torsion(q)) for _ in self.torsion(p))

    def linking(self, p: int) -> RatMatrix:
        """Linking matrix in [0,1) including the orientation sign."""
        key = ("linking", p)
        if key not in self._memo:
            self._memo[key] = tuple(tuple(_mod1(self.orientation * x) for x in row) for row in self.link_matrix(p))
        return self._memo[key]

    def with_orientation(self, sign: int) -> "SurfaceModel":
        return SurfaceModel(self.name, self.dim, self.cohomology, self.cup, self.link, sign)

    def reversed(self) -> "SurfaceModel":
        return self.with_orientation(-self.orientation)

    # validation ------------------------------------------------------------
    def _complete_cup(self, cup: dict) -> tuple:
        dim = self.dim
        out = {}
        for (p, q), m in cup.items():
            if p + q != dim or not (0 <= p <= dim):
                raise SurfaceValidationError(f"cup entry ({p},{q}) does not land in degree {dim}")
            m = tuple(tuple(int(x) for x in row) for row in m)
            bp, bq = self.betti(p), self.betti(q)
            if len(m) != bp or any(len(r) != bq for r in m):
                if not (bp == 0 and len(m) == 0):
                    raise SurfaceValidationError(f"cup matrix C^{{{p},{q}}} must be {bp}x{bq}")
            out[(p, q)] = m
        for p in range(dim + 1):
            q = dim - p
            bp, bq = self.betti(p), self.betti(q)
            if bp != bq:
                raise SurfaceValidationError(
                    f"Poincaré duality degenerate: b_{p}={bp} but b_{q}={bq}")
            sign = (-1) ** (p * q)
            if (p, q) not in out:
                if (q, p) in out:
                    out[(p, q)] = tuple(tuple(sign * x for x in row)
                                        for row in transpose(out[(q, p)], bp))
                elif bp == 0:
                    out[(p, q)] = tuple(() for _ in range(bp))
                else:
                    raise SurfaceValidationError(f"missing cup matrix C^{{{p},{q}}}")
        for p in range(dim + 1):
            q = dim - p
            a, b = out[(p, q)], out[(q, p)]
            if self.betti(p) and determinant(a) == 0:
                raise SurfaceValidationError(f"Poincaré duality degenerate: C^{{{p},{q}}} is singular")
            expect = tuple(tuple((-1) ** (p * q) * x for x in row) for row in transpose(a, self.betti(q)))
            if b != expect:
                raise SurfaceValidationError(
                    f"graded commutativity violated: C^{{{q},{p}}} != (-1)^{{{p * q}}} (C^{{{p},{q}}})^T")
        return tuple(sorted(out.items()))

    def _complete_link(self, link: dict) -> tuple:
        dim = self.dim
        out = {}
        for p, m in link.items():
            q = dim + 1 - p
            if not (0 <= p <= dim and 0 <= q <= dim):
                raise SurfaceValidationError(f"linking entry in degree {p} is out of range")
            m = tuple(tuple(_mod1(Fraction(x)) for x in row) for row in m)
            tp, tq = self.torsion(p), self.torsion(q)
            if len(m) != len(tp) or any(len(r) != len(tq) for r in m):
                raise SurfaceValidationError(f"linking matrix L^{p} must be {len(tp)}x{len(tq)}")
            for i, d in enumerate(tp):
                for j, e in enumerate(tq):
                    if (d * m[i][j]).denominator != 1 or (e * m[i][j]).denominator != 1:
                        raise SurfaceValidationError(
                            f"linking value L^{p}[{i}][{j}]={m[i][j]} incompatible with orders {d}, {e}")
            out[p] = m
        for p in range(dim + 1):
            q = dim + 1 - p
            tp = self.torsion(p)
            if not tp:
                continue
            if not (0 <= q <= dim) or self.torsion(q) != tp:
                raise SurfaceValidationError(
                    f"torsion of H^{p} ({tp}) does not match torsion of H^{q} ({self.torsion(q)})")
            sign = (-1) ** (p * q)
            if p not in out:
                if q in out:
                    out[p] = tuple(tuple(_mod1(sign * x) for x in row) for row in transpose(out[q], len(tp)))
                else:
                    raise SurfaceValidationError(f"missing linking form in degree {p}")
        for p, m in out.items():
            q = dim + 1 - p
            sign = (-1) ** (p * q)
            expect = tuple(tuple(_mod1(sign * x) for x in row) for row in transpose(out[q], len(self.torsion(q))))
            if m != expect:
                raise SurfaceValidationError(f"linking form symmetry violated between degrees {p} and {q}")
            self._check_link_nondegenerate(p, m)
        return tuple(sorted(out.items()))

    def _check_link_nondegenerate(self, p: int, m: RatMatrix):
        q = self.dim + 1 - p
        gp = FgAbGroup.from_invariants(self.torsion(p))
        nq = len(self.torsion(q))
        for t in gp.elements():
            if t.is_zero():
                continue
            if all(_mod1(sum(t.coords[i] * m[i][j] for i in range(len(t.coords)))) == 0 for j in range(nq)):
                raise SurfaceValidationError(f"linking form degenerate in degree {p}: {t.coords} pairs trivially")

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "orientation": self.orientation,
            "cohomology": [{"degree": p, "invariant_factors": list(g.torsion_factors),
                            "free_rank": g.free_rank} for p, g in enumerate(self.cohomology)],
            "cup": [{"p": p, "q": q, "matrix": [list(r) for r in m]} for (p, q), m in self.cup],
            "link": [{"p": p, "matrix_num": [[x.numerator for x in r] for r in m],
                      "matrix_den": [[x.denominator for x in r] for r in m]} for p, m in self.link],
        }

    def summary(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "orientation": self.orientation,
            "cohomology": {str(p): g.describe() for p, g in enumerate(self.cohomology)},
        }


def evaluate_top(class_coords: Sequence[int], model: SurfaceModel, degree: int | None = None) -> int:
    """Integer pairing of a top-degree class with the fundamental class."""
    if degree is not None and degree != model.dim:
        raise ValueError(f"evaluation on the fundamental class needs degree {model.dim}, got {degree}")
    top = model.cup_matrix(0, model.dim)
    if len(class_coords) != model.betti(model.dim):
        raise ValueError(f"expected {model.betti(model.dim)} top-degree coordinates")
    if not top:
        raise ValueError("model has no unit class in degree 0")
    unit_row = top[0]
    return model.orientation * sum(int(c) * int(e) for c, e in zip(class_coords, unit_row))


@dataclass(frozen=True)
class SpacetimeModel:
    """Ultra-static spacetime R x Sigma with field degree k."""

    surface: SurfaceModel
    k: int
    m: int = field(default=-1)

    def __post_init__(self):
        m = self.surface.dim + 1
        if self.m not in (-1, m):
            raise ValueError(f"m must equal dim(Sigma)+1 = {m}, got {self.m}")
        object.__setattr__(self, "m", m)
        if not 1 <= self.k <= m - 1:
            raise ValueError(f"degree k must satisfy 1 <= k <= {m - 1}, got {self.k}")
        object.__setattr__(self, "_memo", {})

    @property
    def sign(self) -> int:
        """(-1)^{k(m-k)}."""
        return -1 if (self.k * (self.m - self.k)) % 2 else 1

    @property
    def duality_sign(self) -> int:
        """(-1)^{k(m-k)+1}."""
        return -self.sign

    @property
    def degrees(self) -> dict[str, int]:
        k, m = self.k, self.m
        return {"u": k - 1, "ut": m - k - 1, "z": k, "zt": m - k}

    def dual(self) -> "SpacetimeModel":
        return SpacetimeModel(self.surface, self.m - self.k)

    def label(self) -> str:
        return f"{self.surface.name}/m={self.m}/k={self.k}"


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _groups(*specs) -> tuple[FgAbGroup, ...]:
    return tuple(FgAbGroup.from_invariants(t, f) for t, f in specs)


def _circle():
    return SurfaceModel("circle", 1, _groups(((), 1), ((), 1)), (((0, 1), ((1,),)),))


def _torus2():
    return SurfaceModel("torus2", 2, _groups(((), 1), ((), 2), ((), 1)),
                        (((0, 2), ((1,),)), ((1, 1), ((0, 1), (-1, 0)))))


def _torus3():
    eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    return SurfaceModel("torus3", 3, _groups(((), 1), ((), 3), ((), 3), ((), 1)),
                        (((0, 3), ((1,),)), ((1, 2), eye)))


def _sphere2():
    return SurfaceModel("sphere2", 2, _groups(((), 1), ((), 0), ((), 1)), (((0, 2), ((1,),)),))


def _s1xs2():
    return SurfaceModel("s1xs2", 3, _groups(((), 1), ((), 1), ((), 1), ((), 1)),
                        (((0, 3), ((1,),)), ((1, 2), ((1,),))))


def lens(p: int, name: str | None = None) -> SurfaceModel:
    if not 2 <= p <= 12:
        raise ValueError(f"lens spaces are available for 2 <= p <= 12, got {p}")
    return SurfaceModel(name or f"lens({p})", 3, _groups(((), 1), ((), 0), ((p,), 0), ((), 1)),
                        (((0, 3), ((1,),)),), ((2, ((Fraction(1, p),),)),))


_FIXED = {
    "circle": _circle,
    "torus2": _torus2,
    "torus3": _torus3,
    "sphere2": _sphere2,
    "s1xs2": _s1xs2,
    "rp3": lambda: lens(2, "rp3"),
}

_LENS = re.compile(r"^lens\(?(\d+)\)?$")


def catalog_names() -> list[str]:
    return list(_FIXED) + [f"lens({p})" for p in range(2, 13)]


def builtin_surface(name: str) -> SurfaceModel:
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    hit = _LENS.match(key)
    if hit:
        return lens(int(hit.group(1)))
    raise KeyError(f"unknown surface {name!r}; choose from {', '.join(catalog_names())}")


def _schema() -> dict:
    text = resources.files("abelian_duality").joinpath("schemas/surface.schema.json").read_text()
    return json.loads(text)


def load_surface(data: str | Mapping[str, Any]) -> SurfaceModel:
    """Build and validate a model from its JSON form (a string or parsed dict)."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise SurfaceValidationError(f"schema violation at {path}: {exc.message}") from None
    dim = data["dim"]
    by_degree = {}
    for entry in data["cohomology"]:
        p = entry["degree"]
        if p > dim:
            raise SurfaceValidationError(f"cohomology degree {p} exceeds dim {dim}")
        if p in by_degree:
            raise SurfaceValidationError(f"duplicate cohomology entry for degree {p}")
        try:
            by_degree[p] = FgAbGroup.from_invariants(entry.get("invariant_factors", []), entry["free_rank"])
        except ValueError as exc:
            raise SurfaceValidationError(f"degree {p}: {exc}") from None
    groups = tuple(by_degree.get(p, FgAbGroup.from_invariants()) for p in range(dim + 1))
    cup = {}
    for entry in data.get("cup", []):
        cup[(entry["p"], entry["q"])] = tuple(tuple(r) for r in entry["matrix"])
    link = {}
    for entry in data.get("link", []):
        num, den = entry["matrix_num"], entry["matrix_den"]
        if len(num) != len(den) or any(len(a) != len(b) for a, b in zip(num, den)):
            raise SurfaceValidationError(f"linking numerator/denominator shapes differ in degree {entry['p']}")
        link[entry["p"]] = tuple(tuple(Fraction(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(num, den))
    return SurfaceModel(data["name"], dim, groups, tuple(cup.items()), tuple(link.items()),
                        data.get("orientation", 1))
