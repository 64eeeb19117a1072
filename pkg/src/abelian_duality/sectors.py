"""Symplectic sectors on a spacetime model and the splitting solver.

Three sectors make up the observables of a degree-k field on R x Sigma:

* ``Top_free``: elements ``(u, ut, z, zt)`` with ``u``/``ut`` real cohomology
  classes of degrees k-1 / m-k-1 modulo the integral lattice, and ``z``/``zt``
  free integral classes of degrees k / m-k.
* ``Top_tor``: torsion classes ``(t, tt)`` of degrees k / m-k.
* ``Dyn``: the propagating part (see :mod:`abelian_duality.dyncyl` for the
  cylinder, or :class:`FiniteDynSector` for a finite stand-in).

Differential cohomology classes are never stored.  Instead a :class:`LiftModel`
keeps the finitely many numbers that products of chosen lifts produce on the
fundamental class, together with the ring rules ``fl(u) . h = fl(u cup ch h)``
and ``tr[A] . h = tr[A ^ curv h]``.  That is enough to compute the initial-data
pairing on every element built from lifts, to correct the lifts so that the
sectors become orthogonal, and to verify the result independently.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .fgab import (CircleValue, as_rational, inverse, pontryagin_pair, real_pair,
                   reduce_mod1, transpose)
from .surface import SpacetimeModel

Num = Fraction | float


class SplittingError(ValueError):
    """Raised when a splitting cannot be produced or is not validated."""


class SplittingObstruction(SplittingError):
    """Self-pairing data that no flat correction can remove."""


class InconsistentCharacterError(ValueError):
    """Character data on a free group that is not additive."""


def _vec(xs: Iterable, n: int, what: str) -> tuple:
    v = tuple(xs)
    if len(v) != n:
        raise ValueError(f"{what} needs {n} coordinates, got {len(v)}")
    return v


def _torus(xs: Iterable, n: int, what: str) -> tuple:
    return tuple(reduce_mod1(x) for x in _vec(xs, n, what))


def _ints(xs: Iterable, n: int, what: str) -> tuple[int, ...]:
    v = _vec(xs, n, what)
    out = tuple(int(x) for x in v)
    if out != tuple(v):
        raise ValueError(f"{what} must be integral")
    return out


def _signed_abs(v: CircleValue) -> float:
    return abs(float(v.signed()))


# ---------------------------------------------------------------------------
# Top_free
# ---------------------------------------------------------------------------

def _cached_hash(self) -> int:
    # elements are dict keys in Weyl algebras and Fraction hashing is slow
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash(tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_hash", h)
    return h


def _add_mod1(a, b):
    if type(a) is Fraction and type(b) is Fraction:
        n1, d1, n2, d2 = a.numerator, a.denominator, b.numerator, b.denominator
        if d1 == d2:
            n, d = n1 + n2, d1
        else:
            n, d = n1 * d2 + n2 * d1, d1 * d2
        g = math.gcd(n, d)
        if g != 1:
            n, d = n // g, d // g
        return Fraction(n % d, d, _normalize=False)
    return reduce_mod1(a + b)


def _neg_mod1(a):
    if type(a) is Fraction:
        n, d = a.numerator, a.denominator
        return Fraction((d - n) % d, d, _normalize=False)
    return reduce_mod1(-a)


@dataclass(frozen=True)
class TopFreeElement:
    """``(u, ut, z, zt)`` with the torus parts reduced into [0, 1)."""

    u: tuple
    ut: tuple
    z: tuple[int, ...]
    zt: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(reduce_mod1(x) for x in self.u))
        object.__setattr__(self, "ut", tuple(reduce_mod1(x) for x in self.ut))
        object.__setattr__(self, "z", tuple(int(x) for x in self.z))
        object.__setattr__(self, "zt", tuple(int(x) for x in self.zt))

    @classmethod
    def _make(cls, u, ut, z, zt) -> "TopFreeElement":
        # fields already normalized
        out = object.__new__(cls)
        object.__setattr__(out, "u", u)
        object.__setattr__(out, "ut", ut)
        object.__setattr__(out, "z", z)
        object.__setattr__(out, "zt", zt)
        return out

    def __add__(self, o: "TopFreeElement") -> "TopFreeElement":
        return TopFreeElement._make(tuple(_add_mod1(a, b) for a, b in zip(self.u, o.u)),
                                    tuple(_add_mod1(a, b) for a, b in zip(self.ut, o.ut)),
                                    tuple(a + b for a, b in zip(self.z, o.z)),
                                    tuple(a + b for a, b in zip(self.zt, o.zt)))

    def __neg__(self) -> "TopFreeElement":
        return TopFreeElement._make(tuple(_neg_mod1(a) for a in self.u), tuple(_neg_mod1(a) for a in self.ut),
                                    tuple(-a for a in self.z), tuple(-a for a in self.zt))

    def __sub__(self, o: "TopFreeElement") -> "TopFreeElement":
        return self + (-o)

    def __mul__(self, n: int) -> "TopFreeElement":
        n = int(n)
        return TopFreeElement(tuple(n * a for a in self.u), tuple(n * a for a in self.ut),
                              tuple(n * a for a in self.z), tuple(n * a for a in self.zt))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not (any(self.u) or any(self.ut) or any(self.z) or any(self.zt))

    __hash__ = _cached_hash

    def sort_key(self):
        return (self.z, self.zt, self.u, self.ut)

    def to_json(self) -> dict:
        return {"u": [str(x) for x in self.u], "ut": [str(x) for x in self.ut],
                "z": list(self.z), "zt": list(self.zt)}


class _Acc:
    """Accumulates ``sum sign * x^T P y`` with integer numerator/denominator.

    Fraction arithmetic renormalizes after every operation; summing into a
    common denominator and reducing once is several times faster.
    """

    __slots__ = ("num", "den", "flt", "is_float")

    def __init__(self):
        self.num, self.den, self.flt, self.is_float = 0, 1, 0.0, False

    def form(self, x: Sequence, P, y: Sequence, sign: int = 1) -> "_Acc":
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = P[i]
            for j, yj in enumerate(y):
                if yj:
                    p = row[j]
                    if p:
                        self._add_product(xi, p, yj, sign)
        return self

    def _add_product(self, a, b, c, sign: int):
        ta, tb, tc = type(a), type(b), type(c)
        if (ta is int or ta is Fraction) and (tb is int or tb is Fraction) and (tc is int or tc is Fraction):
            n = sign * a.numerator * b.numerator * c.numerator
            d = a.denominator * b.denominator * c.denominator
            if d == self.den:
                self.num += n
            elif self.den % d == 0:
                self.num += n * (self.den // d)
            else:
                self.num, self.den = self.num * d + n * self.den, self.den * d
        else:
            self.flt += sign * float(a) * float(b) * float(c)
            self.is_float = True

    def real(self):
        if self.is_float:
            return self.num / self.den + self.flt
        return Fraction(self.num, self.den)

    def circle(self) -> CircleValue:
        if self.is_float:
            return CircleValue(self.num / self.den + self.flt, False)
        return CircleValue(Fraction(self.num % self.den, self.den))


def _free_pairings(model: SpacetimeModel):
    hit = model._memo.get("free_pairings")
    if hit is None:
        s = model.surface
        k, m = model.k, model.m
        hit = model._memo["free_pairings"] = (s.pairing(m - k - 1, k), s.pairing(k - 1, m - k))
    return hit


def _free_dims(model: SpacetimeModel) -> tuple[int, int, int, int]:
    hit = model._memo.get("free_dims")
    if hit is None:
        s = model.surface
        k, m = model.k, model.m
        hit = model._memo["free_dims"] = (s.betti(k - 1), s.betti(m - k - 1), s.betti(k), s.betti(m - k))
    return hit


def free_element(model: SpacetimeModel, u=None, ut=None, z=None, zt=None) -> TopFreeElement:
    nu, nut, nz, nzt = _free_dims(model)
    return TopFreeElement(_vec(u if u is not None else (0,) * nu, nu, "u"),
                          _vec(ut if ut is not None else (0,) * nut, nut, "ut"),
                          _ints(z if z is not None else (0,) * nz, nz, "z"),
                          _ints(zt if zt is not None else (0,) * nzt, nzt, "zt"))


def _check_free(a: TopFreeElement, model: SpacetimeModel):
    if (len(a.u), len(a.ut), len(a.z), len(a.zt)) != _free_dims(model):
        raise ValueError(f"element shape does not match the model {model.label()}")


def sigma_free(a: TopFreeElement, b: TopFreeElement, model: SpacetimeModel) -> CircleValue:
    """The free topological pairing, reduced mod 1."""
    _check_free(a, model)
    _check_free(b, model)
    P1, P2 = _free_pairings(model)
    s = model.sign
    return _Acc().form(a.ut, P1, b.z).form(a.u, P2, b.zt, -s).form(b.ut, P1, a.z, -1).form(b.u, P2, a.zt, s).circle()


def sigma_free_lifted(r: Sequence, rt: Sequence, z: Sequence[int], zt: Sequence[int],
                      model: SpacetimeModel) -> Num:
    """Real lift of ``sigma_free((r, rt, 0, 0), (0, 0, z, zt))`` without reduction."""
    P1, P2 = _free_pairings(model)
    r = [as_rational(x) for x in r]
    rt = [as_rational(x) for x in rt]
    return real_pair(rt, z, P1) - model.sign * real_pair(r, zt, P2)


def duality_free(a: TopFreeElement, model: SpacetimeModel) -> TopFreeElement:
    """Electric/magnetic exchange into the degree m-k model."""
    _check_free(a, model)
    e = model.duality_sign
    return TopFreeElement(a.ut, tuple(e * x for x in a.u), a.zt, tuple(e * x for x in a.z))


# ---------------------------------------------------------------------------
# Top_tor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopTorElement:
    t: tuple[int, ...]
    tt: tuple[int, ...]
    orders: tuple[tuple[int, ...], tuple[int, ...]] = field(repr=False)

    def __post_init__(self):
        ot, ott = self.orders
        object.__setattr__(self, "t", tuple(int(x) % d for x, d in zip(_vec(self.t, len(ot), "t"), ot)))
        object.__setattr__(self, "tt", tuple(int(x) % d for x, d in zip(_vec(self.tt, len(ott), "tt"), ott)))

    def __add__(self, o: "TopTorElement") -> "TopTorElement":
        if o.orders != self.orders:
            raise ValueError("torsion elements of different models")
        return TopTorElement(tuple(a + b for a, b in zip(self.t, o.t)),
                             tuple(a + b for a, b in zip(self.tt, o.tt)), self.orders)

    def __neg__(self) -> "TopTorElement":
        return TopTorElement(tuple(-a for a in self.t), tuple(-a for a in self.tt), self.orders)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, n: int):
        return TopTorElement(tuple(n * a for a in self.t), tuple(n * a for a in self.tt), self.orders)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not (any(self.t) or any(self.tt))

    def sort_key(self):
        return (self.t, self.tt)

    def to_json(self) -> dict:
        return {"t": list(self.t), "tt": list(self.tt)}

    __hash__ = _cached_hash


def tor_orders(model: SpacetimeModel) -> tuple[tuple[int, ...], tuple[int, ...]]:
    s = model.surface
    return s.torsion(model.k), s.torsion(model.m - model.k)


def tor_element(model: SpacetimeModel, t=None, tt=None) -> TopTorElement:
    ot, ott = tor_orders(model)
    return TopTorElement(t if t is not None else (0,) * len(ot),
                         tt if tt is not None else (0,) * len(ott), (ot, ott))


def sigma_tor(a: TopTorElement, b: TopTorElement, model: SpacetimeModel) -> CircleValue:
    """Torsion pairing built from the linking form; zero when there is no torsion."""
    orders = tor_orders(model)
    if a.orders != orders or b.orders != orders:
        raise ValueError(f"torsion element shape does not match {model.label()}")
    L = model.surface.linking(model.m - model.k)
    return _Acc().form(a.tt, L, b.t).form(b.tt, L, a.t, -1).circle()


def duality_tor(a: TopTorElement, model: SpacetimeModel) -> TopTorElement:
    e = model.duality_sign
    ot, ott = a.orders
    return TopTorElement(a.tt, tuple(e * x for x in a.t), (ott, ot))


# ---------------------------------------------------------------------------
# sector groups (presymplectic group protocol used by the Weyl algebra)
# ---------------------------------------------------------------------------

def _random_rational(rng: random.Random, max_den: int) -> Fraction:
    d = rng.randint(1, max_den)
    return Fraction(rng.randrange(d), d)


class TopFreeGroup:
    """Top_free of a spacetime model as a presymplectic group."""

    exact = True

    def __init__(self, model: SpacetimeModel):
        self.model = model
        self.name = f"Top_free[{model.label()}]"

    def __eq__(self, other):
        return isinstance(other, TopFreeGroup) and other.model == self.model

    def __hash__(self):
        return hash((TopFreeGroup, self.model))

    def element(self, u=None, ut=None, z=None, zt=None) -> TopFreeElement:
        return free_element(self.model, u, ut, z, zt)

    def zero(self) -> TopFreeElement:
        return self.element()

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def canonical(self, a: TopFreeElement) -> TopFreeElement:
        _check_free(a, self.model)
        return a

    def sort_key(self, a):
        return a.sort_key()

    def pairing(self, a, b) -> CircleValue:
        return sigma_free(a, b, self.model)

    def random_element(self, rng: random.Random, max_den: int = 12, zmax: int = 3) -> TopFreeElement:
        nu, nut, nz, nzt = _free_dims(self.model)
        return TopFreeElement(tuple(_random_rational(rng, max_den) for _ in range(nu)),
                              tuple(_random_rational(rng, max_den) for _ in range(nut)),
                              tuple(rng.randint(-zmax, zmax) for _ in range(nz)),
                              tuple(rng.randint(-zmax, zmax) for _ in range(nzt)))

    def dual(self) -> "TopFreeGroup":
        return TopFreeGroup(self.model.dual())

    def duality(self, a):
        return duality_free(a, self.model)


class TopTorGroup:
    exact = True

    def __init__(self, model: SpacetimeModel):
        self.model = model
        self.name = f"Top_tor[{model.label()}]"

    def __eq__(self, other):
        return isinstance(other, TopTorGroup) and other.model == self.model

    def __hash__(self):
        return hash((TopTorGroup, self.model))

    def element(self, t=None, tt=None) -> TopTorElement:
        return tor_element(self.model, t, tt)

    def zero(self):
        return self.element()

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def canonical(self, a):
        return a

    def sort_key(self, a):
        return a.sort_key()

    def pairing(self, a, b) -> CircleValue:
        return sigma_tor(a, b, self.model)

    def random_element(self, rng: random.Random, **_) -> TopTorElement:
        ot, ott = tor_orders(self.model)
        return self.element([rng.randrange(d) for d in ot], [rng.randrange(d) for d in ott])

    def dual(self) -> "TopTorGroup":
        return TopTorGroup(self.model.dual())

    def duality(self, a):
        return duality_tor(a, self.model)


# ---------------------------------------------------------------------------
# finite dynamical stand-in
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteDynElement:
    d: tuple  # coefficients on the degree-k dynamical samples
    dt: tuple  # coefficients on the degree-(m-k) samples

    def __add__(self, o):
        return FiniteDynElement(tuple(a + b for a, b in zip(self.d, o.d)),
                                tuple(a + b for a, b in zip(self.dt, o.dt)))

    def __neg__(self):
        return FiniteDynElement(tuple(-a for a in self.d), tuple(-a for a in self.dt))

    def is_zero(self):
        return not (any(self.d) or any(self.dt))

    def sort_key(self):
        return (self.d, self.dt)

    __hash__ = _cached_hash


@dataclass(frozen=True)
class FiniteDynSector:
    """Finitely many dynamical samples ``tr eta'(D)`` on each side.

    ``S[b][a]`` is the real number ``(tr eta'(Dt_b) . tr eta'(D_a))[Sigma]``;
    the dynamical pairing of ``(d, dt)`` and ``(d', dt')`` is
    ``dt.S.d' - dt'.S.d``.
    """

    S: tuple[tuple[Num, ...], ...]
    n: int
    nt: int
    exact: bool = True

    @property
    def name(self) -> str:
        return f"Dyn[finite {self.n}+{self.nt}]"

    def element(self, d=None, dt=None) -> FiniteDynElement:
        return FiniteDynElement(tuple(as_rational(x) for x in _vec(d if d is not None else (0,) * self.n, self.n, "d")),
                                tuple(as_rational(x) for x in _vec(dt if dt is not None else (0,) * self.nt, self.nt, "dt")))

    def zero(self):
        return self.element()

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def canonical(self, a):
        return a

    def sort_key(self, a):
        return a.sort_key()

    def real_pairing(self, a: FiniteDynElement, b: FiniteDynElement) -> Num:
        return _Acc().form(a.dt, self.S, b.d).form(b.dt, self.S, a.d, -1).real()

    def pairing(self, a, b) -> CircleValue:
        return CircleValue.of(self.real_pairing(a, b))

    def random_element(self, rng: random.Random, max_den: int = 12, **_) -> FiniteDynElement:
        return self.element([Fraction(rng.randint(-2 * max_den, 2 * max_den), max_den) for _ in range(self.n)],
                            [Fraction(rng.randint(-2 * max_den, 2 * max_den), max_den) for _ in range(self.nt)])

    def dual(self, model: SpacetimeModel) -> "FiniteDynSector":
        e = model.duality_sign
        St = transpose(self.S, self.n)
        return FiniteDynSector(tuple(tuple(-e * x for x in row) for row in St), self.nt, self.n, self.exact)

    def duality(self, a: FiniteDynElement, model: SpacetimeModel) -> FiniteDynElement:
        e = model.duality_sign
        return FiniteDynElement(a.dt, tuple(e * x for x in a.d))


# ---------------------------------------------------------------------------
# lift pairing data and the lift model
# ---------------------------------------------------------------------------

def _check_unit_interval(m, what: str):
    for row in m:
        for x in row:
            if not 0 <= x < 1:
                raise ValueError(f"{what} entries must lie in [0,1), got {x}")


@dataclass(frozen=True)
class LiftPairingData:
    """``C[it][i] = (ht'_it . h'_i)[Sigma] mod 1``; optional self pairings ``c`` when m = 2k."""

    C: tuple[tuple[Num, ...], ...]
    self_pairings: tuple[tuple[Num, ...], ...] | None = None

    def __post_init__(self):
        C = tuple(tuple(as_rational(x) for x in row) for row in self.C)
        _check_unit_interval(C, "C")
        object.__setattr__(self, "C", C)
        if self.self_pairings is not None:
            c = tuple(tuple(as_rational(x) for x in row) for row in self.self_pairings)
            _check_unit_interval(c, "self pairing")
            object.__setattr__(self, "self_pairings", c)

    @property
    def exact(self) -> bool:
        rows = list(self.C) + list(self.self_pairings or ())
        return all(isinstance(x, Fraction) for row in rows for x in row)


def random_lift_data(model: SpacetimeModel, seed: int = 0, max_den: int = 24) -> LiftPairingData:
    """Seeded rational lift data with denominators up to ``max_den``."""
    rng = random.Random(seed)
    n, nt = model.surface.betti(model.k), model.surface.betti(model.m - model.k)
    C = tuple(tuple(_random_rational(rng, max_den) for _ in range(n)) for _ in range(nt))
    c = None
    if model.m == 2 * model.k:
        odd = model.k % 2 == 1
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                x = _random_rational(rng, max_den)
                if i == j:
                    # odd degree: the diagonal is 2-torsion and cannot be corrected; keep it 0
                    rows[i][i] = Fraction(0) if odd else x
                else:
                    rows[i][j] = x
                    rows[j][i] = reduce_mod1(-x) if odd else x
        c = tuple(map(tuple, rows))
    return LiftPairingData(C, c)


def _dual_basis(P) -> list[list[Fraction]]:
    """Rows r_i with r_i^T P e_j = delta_ij, i.e. the inverse of P."""
    if not P:
        return []
    try:
        return inverse(P)
    except ZeroDivisionError:
        raise SplittingError("Poincaré duality degenerate: cup matrix is singular over Q") from None


@dataclass(frozen=True)
class SplittingResult:
    """Corrected lifts of the free generators.

    ``chi_correction[it]`` are the real coordinates of ``st_it`` (unreduced),
    ``torus_correction[it]`` their reduction mod the lattice, ``dual_basis``
    the rows ``r_i`` and ``residual`` the largest corrected mixed pairing.
    """

    chi_correction: tuple[tuple[Num, ...], ...]
    torus_correction: tuple[tuple[Num, ...], ...]
    dual_basis: tuple[tuple[Fraction, ...], ...]
    residual: float
    residual_matrix: tuple[tuple[CircleValue, ...], ...]
    exact: bool
    self_dual: bool = False

    @property
    def validated(self) -> bool:
        if self.exact:
            return all(v == 0 for row in self.residual_matrix for v in row)
        return self.residual <= 1e-12


def _residual(matrix) -> float:
    return max((_signed_abs(v) for row in matrix for v in row), default=0.0)


def _combine(coeffs: Sequence, basis: Sequence[Sequence], width: int) -> list:
    return [sum((c * b[j] for c, b in zip(coeffs, basis)), 0) for j in range(width)]


def solve_chi_splitting(lifts: LiftPairingData, model: SpacetimeModel) -> SplittingResult:
    """Correct the degree m-k lifts so that all mixed pairings vanish."""
    k, m = model.k, model.m
    n, nt = model.surface.betti(k), model.surface.betti(m - k)
    if len(lifts.C) != nt or any(len(r) != n for r in lifts.C):
        raise ValueError(f"lift data C must be {nt}x{n} for {model.label()}")
    P = model.surface.pairing(m - k - 1, k)
    R = _dual_basis(P)
    width = model.surface.betti(m - k - 1)
    st = [_combine(row, R, width) for row in lifts.C]
    ut = [[reduce_mod1(x) for x in row] for row in st]
    # recompute (ht_it . h_i) = C - (fl mu ut_it . h'_i) with the correction reduced mod lattice
    res = tuple(tuple(CircleValue.of(lifts.C[a][i]) - pontryagin_pair(ut[a], [int(i == j) for j in range(n)], P)
                      for i in range(n)) for a in range(nt))
    return SplittingResult(tuple(map(tuple, st)), tuple(map(tuple, ut)), tuple(map(tuple, R)),
                           _residual(res), res, lifts.exact)


def solve_selfdual_chi(lifts: LiftPairingData, model: SpacetimeModel) -> SplittingResult:
    """One corrected lift per generator with vanishing self pairings (m = 2k).

    For even k the correction is ``-fl mu sum_j c_ij/2 r_j``.  For odd k the
    pairing matrix is first lifted to an antisymmetric real matrix and halved
    the same way; a diagonal entry 1/2 is an obstruction no flat correction
    can remove, since ``(h + fl x).(h + fl x) = h.h`` in odd degree.
    """
    k, m = model.k, model.m
    if m != 2 * k:
        raise SplittingError(f"self-dual splitting needs m = 2k, got m={m}, k={k}")
    c = lifts.self_pairings
    n = model.surface.betti(k)
    if c is None or len(c) != n or any(len(r) != n for r in c):
        raise ValueError(f"self pairings must be an {n}x{n} matrix")
    sgn = -1 if k % 2 else 1
    for i in range(n):
        for j in range(n):
            if CircleValue.of(c[i][j]) != CircleValue.of(sgn * c[j][i]):
                raise ValueError(f"self pairings violate c_ij = (-1)^(k^2) c_ji at ({i},{j})")
    if sgn == 1:
        lifted = [list(row) for row in c]
    else:
        lifted = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            if c[i][i] != 0:
                raise SplittingObstruction(
                    f"self pairing c_{i}{i} = {c[i][i]} in odd degree cannot be removed by a flat correction")
            for j in range(i + 1, n):
                lifted[i][j] = c[i][j]
                lifted[j][i] = -c[i][j]
    P = model.surface.pairing(k - 1, k)
    R = _dual_basis(P)
    half = [[x / 2 for x in row] for row in lifted]
    v = [_combine(row, R, n) for row in half]
    vr = [[reduce_mod1(x) for x in row] for row in v]
    # recomputation: (h_i . h_j) = c_ij - (h'_i . fl mu v_j) - (fl mu v_i . h'_j)
    e = [[int(i == j) for j in range(n)] for i in range(n)]
    res = tuple(tuple(CircleValue.of(c[i][j]) - sgn * pontryagin_pair(vr[j], e[i], P)
                      - pontryagin_pair(vr[i], e[j], P) for j in range(n)) for i in range(n))
    return SplittingResult(tuple(map(tuple, v)), tuple(map(tuple, vr)), tuple(map(tuple, R)),
                           _residual(res), res, lifts.exact, self_dual=True)


# ---------------------------------------------------------------------------
# Delta corrections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaCorrection:
    """Torus element ``(u, ut)`` representing a character of the free fluxes.

    ``u_real``/``ut_real`` are unreduced solutions (useful when the character
    came from real numbers that scale linearly).
    """

    u: tuple
    ut: tuple
    u_real: tuple
    ut_real: tuple
    residual: float


def solve_delta_correction(character: Mapping, model: SpacetimeModel) -> DeltaCorrection:
    """Solve ``sigma_free((u, ut, 0, 0), (0, 0, z, zt)) = character(z, zt)``.

    ``character`` maps pairs of integer tuples ``(z, zt)`` to values (numbers
    or :class:`CircleValue`).  Every basis vector must be present; any further
    entries are checked for additivity.
    """
    nu, nut, nz, nzt = _free_dims(model)
    table = {}
    for key, val in character.items():
        z, zt = key
        table[(tuple(int(x) for x in z), tuple(int(x) for x in zt))] = val
    zero_z, zero_zt = (0,) * nz, (0,) * nzt

    def value(key):
        if key not in table:
            raise InconsistentCharacterError(f"character is not given on basis vector {key}")
        v = table[key]
        return v.value if isinstance(v, CircleValue) else as_rational(v)

    a = [value((tuple(int(i == j) for j in range(nz)), zero_zt)) for i in range(nz)]
    b = [value((zero_z, tuple(int(i == j) for j in range(nzt)))) for i in range(nzt)]
    P1, P2 = _free_pairings(model)
    P1inv, P2inv = _dual_basis(P1), _dual_basis(P2)
    # ut^T P1 = a^T  and  -s u^T P2 = b^T
    ut_real = [sum((a[i] * P1inv[i][l] for i in range(nz)), 0) for l in range(nut)]
    u_real = [-model.sign * sum((b[i] * P2inv[i][l] for i in range(nzt)), 0) for l in range(nu)]
    sol = TopFreeElement(u_real, ut_real, zero_z, zero_zt)
    worst = 0.0
    for (z, zt), val in table.items():
        got = sigma_free(sol, free_element(model, z=z, zt=zt), model)
        want = CircleValue.of(val)
        if got != want:
            raise InconsistentCharacterError(
                f"character is not additive: value at {(z, zt)} is {want}, additive extension gives {got}")
        worst = max(worst, got.distance(want))
    return DeltaCorrection(sol.u, sol.ut, tuple(u_real), tuple(ut_real), worst)


def solve_delta_corrections(raw: Mapping[Any, Mapping], model: SpacetimeModel) -> dict[Any, DeltaCorrection]:
    """Solve one correction per labelled character."""
    return {label: solve_delta_correction(ch, model) for label, ch in raw.items()}


# ---------------------------------------------------------------------------
# initial data assembled from lifts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    """A differential cohomology class on Sigma assembled from chosen lifts.

    ``side`` 0 is degree k, side 1 is degree m-k.  The class is
    ``sum lift_i h'_i + fl mu(flat) + sum tors_a fl xi'(t_a) + sum dyn_b tr eta'(D_b)``.
    """

    side: int
    lift: tuple
    flat: tuple
    tors: tuple
    dyn: tuple

    def __add__(self, o: "Slot") -> "Slot":
        if o.side != self.side:
            raise ValueError("cannot add classes of different sides")
        return Slot(self.side, *(tuple(a + b for a, b in zip(x, y))
                                 for x, y in ((self.lift, o.lift), (self.flat, o.flat),
                                              (self.tors, o.tors), (self.dyn, o.dyn))))

    def scale(self, c) -> "Slot":
        return Slot(self.side, tuple(c * x for x in self.lift), tuple(c * x for x in self.flat),
                    tuple(c * x for x in self.tors), tuple(c * x for x in self.dyn))


@dataclass(frozen=True)
class Datum:
    """A pair of classes (degree k, degree m-k) on Sigma."""

    h: Slot
    ht: Slot

    def __add__(self, o: "Datum") -> "Datum":
        return Datum(self.h + o.h, self.ht + o.ht)


class LiftModel:
    """Raw products of chosen lifts on the fundamental class.

    Tables are stored for (degree m-k factor) x (degree k factor), the only
    order the initial-data pairing needs; the opposite order follows from
    graded commutativity.  ``self_pairings`` covers degree k x degree k when
    m = 2k.

    * ``lifts.C``      ht'_it . h'_i            (mod 1)
    * ``tors_lift``    fl xi'(tt_b) . h'_i      (values in (1/ord) Z / Z)
    * ``lift_tors``    ht'_it . fl xi'(t_a)
    * ``dyn_lift``     tr eta'(Dt_b) . h'_i     (real)
    * ``lift_dyn``     ht'_it . tr eta'(D_a)    (real)
    * ``dyn.S``        tr eta'(Dt_b) . tr eta'(D_a)  (real)
    """

    def __init__(self, model: SpacetimeModel, lifts: LiftPairingData,
                 tors_lift=None, lift_tors=None, dyn: FiniteDynSector | None = None,
                 dyn_lift=None, lift_dyn=None):
        self.model = model
        self.lifts = lifts
        s = model.surface
        k, m = model.k, model.m
        self.n, self.nt = s.betti(k), s.betti(m - k)
        self.ot, self.ott = tor_orders(model)
        self.dyn = dyn
        nd, ndt = (dyn.n, dyn.nt) if dyn else (0, 0)
        self.nd, self.ndt = nd, ndt
        self.tors_lift = self._table(tors_lift, len(self.ott), self.n, "tors_lift")
        self.lift_tors = self._table(lift_tors, self.nt, len(self.ot), "lift_tors")
        self.dyn_lift = self._table(dyn_lift, ndt, self.n, "dyn_lift")
        self.lift_dyn = self._table(lift_dyn, self.nt, nd, "lift_dyn")
        for b, d in enumerate(self.ott):
            for x in self.tors_lift[b]:
                if (d * x).denominator != 1:
                    raise ValueError("flat torsion lift pairing must be killed by the torsion order")
        for row in self.lift_tors:
            for a, d in enumerate(self.ot):
                if (d * row[a]).denominator != 1:
                    raise ValueError("flat torsion lift pairing must be killed by the torsion order")

    @staticmethod
    def _table(t, rows: int, cols: int, what: str):
        if t is None:
            return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))
        t = tuple(tuple(as_rational(x) for x in row) for row in t)
        if len(t) != rows or any(len(r) != cols for r in t):
            raise ValueError(f"{what} must be {rows}x{cols}")
        return t

    @classmethod
    def random(cls, model: SpacetimeModel, seed: int = 0, n_dyn: int = 2, max_den: int = 24) -> "LiftModel":
        """Seeded rational raw data for every table."""
        lifts = random_lift_data(model, seed, max_den)
        rng = random.Random(seed * 7919 + 17)
        s = model.surface
        n, nt = s.betti(model.k), s.betti(model.m - model.k)
        ot, ott = tor_orders(model)
        tors_lift = [[Fraction(rng.randrange(d), d) for _ in range(n)] for d in ott]
        lift_tors = [[Fraction(rng.randrange(d), d) for d in ot] for _ in range(nt)]

        def real():
            return Fraction(rng.randint(-3 * max_den, 3 * max_den), rng.randint(1, max_den))

        dyn = FiniteDynSector(tuple(tuple(real() for _ in range(n_dyn)) for _ in range(n_dyn)), n_dyn, n_dyn)
        dyn_lift = [[real() for _ in range(n)] for _ in range(n_dyn)]
        lift_dyn = [[real() for _ in range(n_dyn)] for _ in range(nt)]
        return cls(model, lifts, tors_lift, lift_tors, dyn, dyn_lift, lift_dyn)

    # building blocks -----------------------------------------------------
    def slot(self, side: int, lift=None, flat=None, tors=None, dyn=None) -> Slot:
        s = self.model.surface
        k, m = self.model.k, self.model.m
        deg = k if side == 0 else m - k
        nl = s.betti(deg)
        nf = s.betti(deg - 1)
        ntor = len(self.ot if side == 0 else self.ott)
        nd = self.nd if side == 0 else self.ndt
        return Slot(side,
                    tuple(lift) if lift is not None else (0,) * nl,
                    tuple(as_rational(x) for x in flat) if flat is not None else (0,) * nf,
                    tuple(tors) if tors is not None else (0,) * ntor,
                    tuple(as_rational(x) for x in dyn) if dyn is not None else (0,) * nd)

    def degree(self, side: int) -> int:
        return self.model.k if side == 0 else self.model.m - self.model.k

    def _flat_times(self, flat: Sequence, p: int, other: Slot) -> Num:
        """(fl mu r . y)[Sigma] = (r cup ch y)[Sigma]; only the free part of ch y matters."""
        q = self.model.m - p
        if not any(flat):
            return 0
        return real_pair(flat, other.lift, self.model.surface.pairing(p - 1, q))

    def real_product(self, x: Slot, y: Slot) -> Num:
        """Unreduced ``(x . y)[Sigma]``; lift x lift entries use their [0,1) representatives."""
        p, q = self.degree(x.side), self.degree(y.side)
        if p + q != self.model.m:
            raise ValueError("product does not land in the top degree")
        sgn = -1 if (p * q) % 2 else 1
        total = self._flat_times(x.flat, p, y) + sgn * self._flat_times(y.flat, q, x)
        if (x.side, y.side) == (1, 0):
            total += self._raw(x, y)
        elif (x.side, y.side) == (0, 1):
            total += sgn * self._raw(y, x)
        else:
            if any(x.tors) or any(y.tors) or any(x.dyn) or any(y.dyn):
                raise ValueError("same-side products are only modelled for lifts and flat parts")
            c = self.lifts.self_pairings
            if c is None:
                raise ValueError("same-side product needs self pairings")
            total += real_pair(x.lift, y.lift, c)
        return total

    def product(self, x: Slot, y: Slot) -> CircleValue:
        """``(x . y)[Sigma]`` from the raw tables and the ring rules."""
        return CircleValue.of(self.real_product(x, y))

    def _raw(self, x: Slot, y: Slot) -> Num:
        # x of degree m-k, y of degree k
        total = real_pair(x.lift, y.lift, self.lifts.C)
        total += real_pair(x.tors, y.lift, self.tors_lift)
        total += real_pair(x.lift, y.tors, self.lift_tors)
        total += real_pair(x.tors, y.tors, self.model.surface.linking(self.model.m - self.model.k))
        total += real_pair(x.dyn, y.lift, self.dyn_lift)
        total += real_pair(x.lift, y.dyn, self.lift_dyn)
        if self.dyn is not None:
            total += real_pair(x.dyn, y.dyn, self.dyn.S)
        return total

    def sigma(self, X: Datum, Y: Datum) -> CircleValue:
        """Initial-data pairing ``(ht . h' - ht' . h)[Sigma]``."""
        return self.product(X.ht, Y.h) - self.product(Y.ht, X.h)

    def free_characteristic(self, X: Datum) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Free part of the characteristic classes of a datum."""
        return tuple(X.h.lift), tuple(X.ht.lift)


@dataclass(frozen=True)
class Splitting:
    """Corrected splittings: chi, Delta_xi per torsion generator, Delta_eta per dynamical sample."""

    lift_model: LiftModel
    chi: SplittingResult
    delta_xi: tuple[tuple[DeltaCorrection, ...], tuple[DeltaCorrection, ...]]
    delta_eta: tuple[tuple[DeltaCorrection, ...], tuple[DeltaCorrection, ...]]

    @property
    def model(self) -> SpacetimeModel:
        return self.lift_model.model

    @property
    def validated(self) -> bool:
        worst = max([self.chi.residual] + [d.residual for side in self.delta_xi + self.delta_eta for d in side])
        return self.chi.validated and worst == 0

    # corrected building blocks ---------------------------------------------
    def chi_datum(self, z: Sequence[int], zt: Sequence[int]) -> Datum:
        lm = self.lift_model
        flat = [0] * len(self.chi.torus_correction[0]) if self.chi.torus_correction else \
            [0] * lm.model.surface.betti(lm.model.m - lm.model.k - 1)
        for c, row in zip(zt, self.chi.torus_correction):
            flat = [f - c * r for f, r in zip(flat, row)]
        return Datum(lm.slot(0, lift=z), lm.slot(1, lift=zt, flat=flat))

    def nu_datum(self, u: Sequence, ut: Sequence) -> Datum:
        lm = self.lift_model
        return Datum(lm.slot(0, flat=u), lm.slot(1, flat=ut))

    def xi_datum(self, t: Sequence[int], tt: Sequence[int]) -> Datum:
        lm = self.lift_model
        u = [0] * lm.model.surface.betti(lm.model.k - 1)
        ut = [0] * lm.model.surface.betti(lm.model.m - lm.model.k - 1)
        for coeff, corr in list(zip(t, self.delta_xi[0])) + list(zip(tt, self.delta_xi[1])):
            u = [a - coeff * b for a, b in zip(u, corr.u)]
            ut = [a - coeff * b for a, b in zip(ut, corr.ut)]
        return Datum(lm.slot(0, tors=t, flat=u), lm.slot(1, tors=tt, flat=ut))

    def eta_datum(self, d: Sequence, dt: Sequence) -> Datum:
        lm = self.lift_model
        u = [0] * lm.model.surface.betti(lm.model.k - 1)
        ut = [0] * lm.model.surface.betti(lm.model.m - lm.model.k - 1)
        for coeff, corr in list(zip(d, self.delta_eta[0])) + list(zip(dt, self.delta_eta[1])):
            u = [a - coeff * b for a, b in zip(u, corr.u_real)]
            ut = [a - coeff * b for a, b in zip(ut, corr.ut_real)]
        return Datum(lm.slot(0, dyn=d, flat=u), lm.slot(1, dyn=dt, flat=ut))

    def embed(self, obs: "ObservableElement") -> Datum:
        """Image of a decomposed observable as initial data on Sigma."""
        f, t = obs.free, obs.tor
        X = self.nu_datum(f.u, f.ut) + self.chi_datum(f.z, f.zt) + self.xi_datum(t.t, t.tt)
        if obs.dyn is not None:
            if not isinstance(obs.dyn, FiniteDynElement):
                raise TypeError("only finite dynamical data can be embedded as lift data")
            X = X + self.eta_datum(obs.dyn.d, obs.dyn.dt)
        return X

    # certificate ------------------------------------------------------------
    def certificate(self) -> list[dict]:
        """Exact checks of the orthogonality conditions and sector identities on basis elements."""
        lm = self.lift_model
        model = lm.model
        nu, nut, nz, nzt = _free_dims(model)
        checks = []

        def unit(n, i):
            return [int(i == j) for j in range(n)]

        chis = [self.chi_datum(unit(nz, i), [0] * nzt) for i in range(nz)] + \
               [self.chi_datum([0] * nz, unit(nzt, i)) for i in range(nzt)]
        xis = [self.xi_datum(unit(len(lm.ot), i), [0] * len(lm.ott)) for i in range(len(lm.ot))] + \
              [self.xi_datum([0] * len(lm.ot), unit(len(lm.ott), i)) for i in range(len(lm.ott))]
        etas = [self.eta_datum(unit(lm.nd, i), [0] * lm.ndt) for i in range(lm.nd)] + \
               [self.eta_datum([0] * lm.nd, unit(lm.ndt, i)) for i in range(lm.ndt)]
        nus = [self.nu_datum([Fraction(1, 7) if j == i else 0 for j in range(nu)], [0] * nut) for i in range(nu)] + \
              [self.nu_datum([0] * nu, [Fraction(1, 7) if j == i else 0 for j in range(nut)]) for i in range(nut)]

        def worst(pairs):
            vals = [lm.sigma(a, b) for a, b in pairs]
            exact = all(v.exact for v in vals)
            return max((_signed_abs(v) for v in vals), default=0.0), exact, all(v == 0 for v in vals)

        for name, pairs in (
            ("chi x chi", [(a, b) for a in chis for b in chis]),
            ("xi x chi", [(a, b) for a in xis for b in chis]),
            ("eta x chi", [(a, b) for a in etas for b in chis]),
            ("eta x xi", [(a, b) for a in etas for b in xis]),
            ("nu x xi", [(a, b) for a in nus for b in xis]),
            ("eta x nu", [(a, b) for a in etas for b in nus]),
        ):
            val, exact, ok = worst(pairs)
            checks.append({"name": f"orthogonality {name}", "value": val, "exact": exact, "pass": ok})
        # identities: nu x chi reproduces sigma_free, xi x xi reproduces sigma_tor
        bad = 0
        for i, a in enumerate(nus):
            for j, b in enumerate(chis):
                ua = ([Fraction(1, 7) if x == i else 0 for x in range(nu)] if i < nu else [0] * nu)
                uta = ([Fraction(1, 7) if x == i - nu else 0 for x in range(nut)] if i >= nu else [0] * nut)
                zb = unit(nz, j) if j < nz else [0] * nz
                ztb = unit(nzt, j - nz) if j >= nz else [0] * nzt
                want = sigma_free(free_element(model, ua, uta), free_element(model, z=zb, zt=ztb), model)
                if lm.sigma(a, b) != want:
                    bad += 1
        checks.append({"name": "identity nu x chi = sigma_free", "value": bad, "exact": True, "pass": bad == 0})
        bad = 0
        tors_basis = [(unit(len(lm.ot), i), [0] * len(lm.ott)) for i in range(len(lm.ot))] + \
                     [([0] * len(lm.ot), unit(len(lm.ott), i)) for i in range(len(lm.ott))]
        for (ta, tta), a in zip(tors_basis, xis):
            for (tb, ttb), b in zip(tors_basis, xis):
                want = sigma_tor(tor_element(model, ta, tta), tor_element(model, tb, ttb), model)
                if lm.sigma(a, b) != want:
                    bad += 1
        checks.append({"name": "identity xi x xi = sigma_tor", "value": bad, "exact": True, "pass": bad == 0})
        # characteristic classes of chi are the requested fluxes
        bad = sum(1 for i, X in enumerate(chis)
                  if lm.free_characteristic(X) != (tuple(unit(nz, i)) if i < nz else (0,) * nz,
                                                  tuple(unit(nzt, i - nz)) if i >= nz else (0,) * nzt))
        checks.append({"name": "q ch chi = id", "value": bad, "exact": True, "pass": bad == 0})
        checks.append({"name": "chi residual", "value": self.chi.residual, "exact": self.chi.exact,
                       "pass": self.chi.validated})
        return checks


def build_splitting(lift_model: LiftModel) -> Splitting:
    """Run the full construction: chi correction, then Delta_xi and Delta_eta."""
    model = lift_model.model
    chi = solve_chi_splitting(lift_model.lifts, model)
    if not chi.validated:
        raise SplittingError(f"chi splitting residual {chi.residual} is not zero")
    # provisional splitting with chi corrected and no Delta corrections yet
    empty = ((), ())
    prov = Splitting(lift_model, chi, empty, empty)
    nu, nut, nz, nzt = _free_dims(model)
    basis = [(tuple(int(i == j) for j in range(nz)), (0,) * nzt) for i in range(nz)] + \
            [((0,) * nz, tuple(int(i == j) for j in range(nzt))) for i in range(nzt)]
    lm = lift_model

    def character(datum: Datum, real: bool) -> dict:
        out = {}
        for z, zt in basis:
            C = prov.chi_datum(z, zt)
            if real:
                # real lift of the pairing so that Delta_eta scales linearly with the coefficients
                out[(z, zt)] = _real_sigma(lm, datum, C)
            else:
                out[(z, zt)] = lm.sigma(datum, C)
        return out

    def unit(n, i):
        return [int(i == j) for j in range(n)]

    nt0, nt1 = len(lm.ot), len(lm.ott)
    xi0 = tuple(solve_delta_correction(character(Datum(lm.slot(0, tors=unit(nt0, i)), lm.slot(1)), False), model)
                for i in range(nt0))
    xi1 = tuple(solve_delta_correction(character(Datum(lm.slot(0), lm.slot(1, tors=unit(nt1, i))), False), model)
                for i in range(nt1))
    eta0 = tuple(solve_delta_correction(character(Datum(lm.slot(0, dyn=unit(lm.nd, i)), lm.slot(1)), True), model)
                 for i in range(lm.nd))
    eta1 = tuple(solve_delta_correction(character(Datum(lm.slot(0), lm.slot(1, dyn=unit(lm.ndt, i))), True), model)
                 for i in range(lm.ndt))
    return Splitting(lift_model, chi, (xi0, xi1), (eta0, eta1))


def _real_sigma(lm: LiftModel, X: Datum, Y: Datum) -> Num:
    return lm.real_product(X.ht, Y.h) - lm.real_product(Y.ht, X.h)


# ---------------------------------------------------------------------------
# assembled observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObservableElement:
    dyn: Any
    free: TopFreeElement
    tor: TopTorElement

    def sort_key(self):
        d = self.dyn.sort_key() if self.dyn is not None else ()
        return (self.free.sort_key(), self.tor.sort_key(), d)

    __hash__ = _cached_hash


class ObservableGroup:
    """Dyn + Top_free + Top_tor with the block-diagonal pairing."""

    def __init__(self, model: SpacetimeModel, dyn=None, splitting: Splitting | None = None):
        self.model = model
        self.dyn = dyn
        self.splitting = splitting
        self.free = TopFreeGroup(model)
        self.tor = TopTorGroup(model)
        self.exact = getattr(dyn, "exact", True) if dyn is not None else True
        self.name = f"Obs[{model.label()}]"

    def __eq__(self, other):
        return (isinstance(other, ObservableGroup) and other.model == self.model
                and other.dyn is self.dyn)

    def __hash__(self):
        return hash((ObservableGroup, self.model, id(self.dyn)))

    def element(self, dyn=None, free: TopFreeElement | None = None, tor: TopTorElement | None = None):
        if dyn is None and self.dyn is not None:
            dyn = self.dyn.zero()
        return ObservableElement(dyn, free if free is not None else self.free.zero(),
                                 tor if tor is not None else self.tor.zero())

    def zero(self):
        return self.element()

    def add(self, a, b):
        d = None if a.dyn is None else self.dyn.add(a.dyn, b.dyn)
        return ObservableElement(d, a.free + b.free, a.tor + b.tor)

    def neg(self, a):
        d = None if a.dyn is None else self.dyn.neg(a.dyn)
        return ObservableElement(d, -a.free, -a.tor)

    def canonical(self, a):
        d = a.dyn if a.dyn is None else self.dyn.canonical(a.dyn)
        return ObservableElement(d, a.free, a.tor)

    def sort_key(self, a):
        return a.sort_key()

    def pairing(self, a, b) -> CircleValue:
        total = sigma_free(a.free, b.free, self.model) + sigma_tor(a.tor, b.tor, self.model)
        if a.dyn is not None and b.dyn is not None:
            total = total + self.dyn.pairing(a.dyn, b.dyn)
        return total

    def random_element(self, rng: random.Random, **kw):
        d = self.dyn.random_element(rng, **kw) if self.dyn is not None else None
        return ObservableElement(d, self.free.random_element(rng, **kw), self.tor.random_element(rng))

    def duality(self, a: ObservableElement) -> ObservableElement:
        return duality_full(a, self.model, self.dyn)

    def dual(self) -> "ObservableGroup":
        dyn = None
        if self.dyn is not None:
            dyn = self.dyn.dual(self.model) if isinstance(self.dyn, FiniteDynSector) else self.dyn.dual()
        return ObservableGroup(self.model.dual(), dyn)


def duality_full(o: ObservableElement, model: SpacetimeModel, dyn=None) -> ObservableElement:
    d = o.dyn
    if d is not None:
        if dyn is None:
            raise ValueError("a dynamical sector is needed to dualize the dynamical component")
        d = dyn.duality(d, model) if isinstance(dyn, FiniteDynSector) else dyn.duality(d)
    return ObservableElement(d, duality_free(o.free, model), duality_tor(o.tor, model))


def assemble_observables(model: SpacetimeModel, dyn_handle=None,
                         splitting: Splitting | SplittingResult | None = None) -> ObservableGroup:
    """The observable group with pairing ``sigma_Dyn + sigma_free + sigma_tor``.

    The splitting that justifies the block-diagonal form must be validated.
    """
    if splitting is None:
        raise SplittingError("a validated splitting is required to assemble the observables")
    if not splitting.validated:
        raise SplittingError("splitting has a nonzero residual; refusing to assemble")
    return ObservableGroup(model, dyn_handle, splitting if isinstance(splitting, Splitting) else None)
