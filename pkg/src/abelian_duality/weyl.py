"""Weyl algebras of presymplectic abelian groups at the level of finite formal sums.

A group is any object with ``zero()``, ``add``, ``neg``, ``canonical``,
``sort_key``, ``pairing`` (returning a :class:`CircleValue`) and an ``exact``
flag.  Elements must be hashable after ``canonical``.

Coefficients are :class:`PhaseSum` values: formal sums ``sum_phi a_phi e^{2 pi i phi}``
with exact rational phases.  Multiplying generators only shifts phases, so
associativity and the vanishing of ``omega(a* a)`` can be checked exactly.
In float mode a phase sum collapses to a single complex number.

C*-completions are not modelled; positivity is certified through Gram
matrices instead.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from .fgab import CircleValue, phase_of
from .sectors import (ObservableElement, ObservableGroup, TopFreeElement, TopFreeGroup,
                      TopTorGroup, duality_full)

FLOAT_DROP = 1e-15


# ---------------------------------------------------------------------------
# phase sums
# ---------------------------------------------------------------------------

class PhaseSum:
    """Formal complex combination of exact phases; immutable.

    Phases are stored as reduced integer pairs ``(n, d)`` with ``0 <= n < d``;
    hashing and adding those is much cheaper than doing the same with Fractions.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean: dict = {}
        for ph, amp in (terms or {}).items():
            amp = complex(amp)
            if isinstance(ph, Rational) and not isinstance(ph, bool):
                key = _key(ph)
            else:
                # float phase: fold it into the amplitude
                amp = amp * phase_of(ph)
                key = _ZERO_KEY
            clean[key] = clean.get(key, 0j) + amp
        self.terms = {k: v for k, v in clean.items() if v != 0}

    @classmethod
    def _raw(cls, terms: dict) -> "PhaseSum":
        out = cls.__new__(cls)
        out.terms = {k: v for k, v in terms.items() if v != 0}
        return out

    @classmethod
    def scalar(cls, c: complex) -> "PhaseSum":
        return cls._raw({_ZERO_KEY: complex(c)})

    @classmethod
    def phase(cls, v, amp: complex = 1) -> "PhaseSum":
        if isinstance(v, CircleValue):
            v = v.value
        return cls({v: amp})

    def phases(self) -> dict[Fraction, complex]:
        return {Fraction(n, d): v for (n, d), v in self.terms.items()}

    def __add__(self, o: "PhaseSum") -> "PhaseSum":
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0j) + v
        return PhaseSum._raw(t)

    def __neg__(self) -> "PhaseSum":
        return PhaseSum._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o) -> "PhaseSum":
        if not isinstance(o, PhaseSum):
            o = complex(o)
            return PhaseSum._raw({k: v * o for k, v in self.terms.items()})
        t: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = _add_keys(k1, k2)
                t[k] = t.get(k, 0j) + v1 * v2
        return PhaseSum._raw(t)

    __rmul__ = __mul__

    def shift(self, v) -> "PhaseSum":
        """Multiply by ``e^{2 pi i v}``."""
        if isinstance(v, CircleValue):
            v = v.value
        if not (isinstance(v, Rational) and not isinstance(v, bool)):
            return self * phase_of(v)
        k2 = _key(v)
        if k2 == _ZERO_KEY:
            return self
        return PhaseSum._raw({_add_keys(k, k2): a for k, a in self.terms.items()})

    def conjugate(self) -> "PhaseSum":
        return PhaseSum._raw({((d - n) % d, d): v.conjugate() for (n, d), v in self.terms.items()})

    def value(self) -> complex:
        items = [(v * phase_of(Fraction(n, d))) for (n, d), v in sorted(self.terms.items(), key=_key_order)]
        return complex(math.fsum(x.real for x in items), math.fsum(x.imag for x in items))

    def is_zero(self) -> bool:
        return not self.terms

    def drop_small(self, eps: float) -> "PhaseSum":
        return PhaseSum._raw({k: v for k, v in self.terms.items() if abs(v) >= eps})

    def __eq__(self, o) -> bool:
        if isinstance(o, (int, float, complex)):
            o = PhaseSum.scalar(o)
        return isinstance(o, PhaseSum) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        inner = " + ".join(f"{v}*e(2pi i {n}/{d})" for (n, d), v in sorted(self.terms.items(), key=_key_order))
        return f"PhaseSum({inner or 0})"


_ZERO_KEY = (0, 1)


def _key(x) -> tuple[int, int]:
    n, d = x.numerator, x.denominator
    return (n % d, d)


def _add_keys(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    n1, d1 = a
    n2, d2 = b
    if d1 == d2:
        n, d = n1 + n2, d1
    else:
        n, d = n1 * d2 + n2 * d1, d1 * d2
    g = math.gcd(n, d)
    if g != 1:
        n, d = n // g, d // g
    return (n % d, d)


def _key_order(item):
    (n, d), _ = item
    return Fraction(n, d)


def _as_phasesum(c) -> PhaseSum:
    return c if isinstance(c, PhaseSum) else PhaseSum.scalar(c)


# ---------------------------------------------------------------------------
# Weyl elements
# ---------------------------------------------------------------------------

class WeylElement:
    """Finite sum ``sum_g alpha_g W(g)`` over a presymplectic group."""

    __slots__ = ("group", "terms")

    def __init__(self, group, terms: Mapping | None = None):
        self.group = group
        exact = getattr(group, "exact", True)
        t: dict = {}
        for g, c in (terms or {}).items():
            g = group.canonical(g)
            t[g] = t.get(g, PhaseSum()) + _as_phasesum(c)
        if not exact:
            t = {g: c.drop_small(FLOAT_DROP) for g, c in t.items()}
        self.terms = {g: c for g, c in t.items() if not c.is_zero()}

    # construction ---------------------------------------------------------
    @classmethod
    def generator(cls, group, g, coeff: complex = 1) -> "WeylElement":
        return cls(group, {g: coeff})

    @classmethod
    def unit(cls, group) -> "WeylElement":
        return cls.generator(group, group.zero())

    # algebra ---------------------------------------------------------------
    def _check(self, o: "WeylElement"):
        if o.group != self.group:
            raise ValueError(f"Weyl elements over different groups: {self.group.name} vs {o.group.name}")

    def __add__(self, o: "WeylElement") -> "WeylElement":
        self._check(o)
        t = dict(self.terms)
        for g, c in o.terms.items():
            t[g] = t.get(g, PhaseSum()) + c
        return WeylElement(self.group, t)

    def __neg__(self) -> "WeylElement":
        return WeylElement(self.group, {g: -c for g, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "WeylElement":
        c = _as_phasesum(c)
        return WeylElement(self.group, {g: v * c for g, v in self.terms.items()})

    def __mul__(self, o):
        if isinstance(o, WeylElement):
            return weyl_mul(self, o)
        return self.scale(o)

    def __rmul__(self, c):
        return self.scale(c)

    def star(self) -> "WeylElement":
        return weyl_star(self)

    def norm1(self) -> float:
        return norm1(self)

    def items(self) -> list[tuple[Any, PhaseSum]]:
        return sorted(self.terms.items(), key=lambda kv: self.group.sort_key(kv[0]))

    def coefficient(self, g) -> complex:
        return self.terms.get(self.group.canonical(g), PhaseSum()).value()

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o) -> bool:
        return isinstance(o, WeylElement) and o.group == self.group and o.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def distance(self, o: "WeylElement") -> float:
        """``||self - o||_1`` computed on collapsed coefficients."""
        keys = set(self.terms) | set(o.terms)
        return math.fsum(abs(self.terms.get(g, PhaseSum()).value() - o.terms.get(g, PhaseSum()).value())
                         for g in sorted(keys, key=self.group.sort_key))

    def __repr__(self):
        return f"WeylElement({self.group.name}, {len(self.terms)} terms)"


def _product(G, g, h):
    # (g + h, sigma(g, h)); generators recur across products, so memoize on the group
    cache = G.__dict__.get("_products")
    if cache is None or len(cache) > 200_000:
        cache = {}
        object.__setattr__(G, "_products", cache)
    hit = cache.get((g, h))
    if hit is None:
        hit = cache[(g, h)] = (G.canonical(G.add(g, h)), G.pairing(g, h).value)
    return hit


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    """Product from ``W(g) W(h) = e^{2 pi i sigma(g,h)} W(g+h)``."""
    a._check(b)
    G = a.group
    t: dict = {}
    for g, c in a.terms.items():
        for h, d in b.terms.items():
            key, phase = _product(G, g, h)
            t[key] = t.get(key, PhaseSum()) + (c * d).shift(phase)
    return WeylElement(G, t)


def weyl_star(a: WeylElement) -> WeylElement:
    G = a.group
    return WeylElement(G, {G.neg(g): c.conjugate() for g, c in a.terms.items()})


def norm1(a: WeylElement) -> float:
    return math.fsum(abs(c.value()) for _, c in a.items())


def random_weyl(group, rng: random.Random, n_terms: int = 3, coeff_range: int = 3, **kw) -> WeylElement:
    """Seeded random element with Gaussian-integer coefficients."""
    terms: dict = {}
    for _ in range(n_terms):
        g = group.canonical(group.random_element(rng, **kw))
        c = complex(rng.randint(-coeff_range, coeff_range), rng.randint(-coeff_range, coeff_range))
        terms[g] = terms.get(g, 0) + c
    return WeylElement(group, terms)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

class StateError(ValueError):
    pass


@dataclass
class StateFunctional:
    """Linear functional fixed by its values on generators."""

    name: str
    group: Any
    on_generator: Callable[[Any], Any]

    def exact_value(self, a: WeylElement) -> PhaseSum:
        if a.group != self.group:
            raise StateError(f"state {self.name} is defined on {self.group.name}, not {a.group.name}")
        total = PhaseSum()
        for g, c in a.items():
            v = self.on_generator(g)
            if v is None:
                raise StateError(f"state {self.name} cannot evaluate generator {g}")
            total = total + c * _as_phasesum(v)
        return total

    def __call__(self, a: WeylElement) -> complex:
        return self.exact_value(a).value()

    def generator_value(self, g) -> complex:
        return _as_phasesum(self.on_generator(self.group.canonical(g))).value()


def _require(group, cls, what: str):
    if not isinstance(group, cls):
        raise StateError(f"{what} needs a {cls.__name__}, got {getattr(group, 'name', group)}")


def omega_free(group: TopFreeGroup) -> StateFunctional:
    """Supported on pure torus generators (no fluxes)."""
    _require(group, TopFreeGroup, "omega_free")
    return StateFunctional("omega_free", group, lambda g: 1 if not (any(g.z) or any(g.zt)) else 0)


def omega_free_faithful(group: TopFreeGroup) -> StateFunctional:
    _require(group, TopFreeGroup, "omega_free_faithful")
    return StateFunctional("omega_free_faithful", group, lambda g: 1 if g.is_zero() else 0)


def omega_tor(group: TopTorGroup) -> StateFunctional:
    _require(group, TopTorGroup, "omega_tor")
    return StateFunctional("omega_tor", group, lambda g: 1 if g.is_zero() else 0)


def omega_total(group: ObservableGroup, dyn_state: StateFunctional | None = None) -> StateFunctional:
    """Product state ``omega_Dyn * omega_free * omega_tor`` on the assembled observables."""
    _require(group, ObservableGroup, "omega_total")
    if group.dyn is not None and dyn_state is None:
        raise StateError("missing dyn evaluator: the observable group has a dynamical sector")
    free, tor = omega_free(group.free), omega_tor(group.tor)

    def gen(g: ObservableElement):
        v = _as_phasesum(free.on_generator(g.free)) * _as_phasesum(tor.on_generator(g.tor))
        if v.is_zero() or g.dyn is None:
            return v
        return v * _as_phasesum(dyn_state.on_generator(g.dyn))

    return StateFunctional("omega_total", group, gen)


def omega_free_eval(a: WeylElement) -> complex:
    return omega_free(a.group)(a)


def omega_free_faithful_eval(a: WeylElement) -> complex:
    return omega_free_faithful(a.group)(a)


def omega_tor_eval(a: WeylElement) -> complex:
    return omega_tor(a.group)(a)


def omega_total_eval(a: WeylElement, dyn_state: StateFunctional | None = None) -> complex:
    return omega_total(a.group, dyn_state)(a)


def gelfand_witness(group: TopFreeGroup, g: TopFreeElement) -> WeylElement:
    """``W(0,0,z,zt) - e^{2 pi i sigma((0,0,z,zt), g)} W(g)``: nonzero, yet ``omega_free(a* a) = 0``."""
    flux = group.element(z=g.z, zt=g.zt)
    if flux == group.canonical(g):
        raise ValueError("the witness needs a nonzero torus part (u, ut)")
    return WeylElement(group, {flux: 1}) - WeylElement(group, {g: PhaseSum.phase(group.pairing(flux, g))})


def is_duality_invariant(state: StateFunctional, dual_state: StateFunctional,
                         duality: Callable[[Any], Any], elements: Iterable, tol: float = 0.0) -> float:
    """Largest ``|omega'(W(zeta g)) - omega(W(g))|`` over the given generators."""
    worst = 0.0
    for g in elements:
        worst = max(worst, abs(dual_state.generator_value(duality(g)) - state.generator_value(g)))
    return worst


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

MAX_GRAM = 64


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    min_eigenvalue: float
    hermitian_defect: float


def gram_matrix(state: StateFunctional, elements: Sequence) -> np.ndarray:
    G = state.group
    n = len(elements)
    M = np.zeros((n, n), dtype=complex)
    for i, gi in enumerate(elements):
        Wi = WeylElement.generator(G, gi).star()
        for j, gj in enumerate(elements):
            M[i, j] = state(weyl_mul(Wi, WeylElement.generator(G, gj)))
    return M


def gram_positivity(state: StateFunctional, elements: Sequence, herm_tol: float = 1e-12) -> GramResult:
    """Gram matrix ``M_ij = omega(W(g_i)* W(g_j))`` and its smallest eigenvalue."""
    if len(elements) > MAX_GRAM:
        raise ValueError(f"at most {MAX_GRAM} elements, got {len(elements)}")
    if not elements:
        return GramResult(np.zeros((0, 0), dtype=complex), math.inf, 0.0)
    M = gram_matrix(state, elements)
    defect = float(np.max(np.abs(M - M.conj().T)))
    scale = max(1.0, float(np.max(np.abs(M))))
    if defect > herm_tol * scale:
        raise AssertionError(f"Gram matrix is not Hermitian (defect {defect:.3e})")
    H = (M + M.conj().T) / 2
    return GramResult(M, float(np.linalg.eigvalsh(H)[0]), defect)


# ---------------------------------------------------------------------------
# direct sums and tensor factorization
# ---------------------------------------------------------------------------

class DirectSum:
    """``G1 + G2`` with pairing ``sigma1 + sigma2`` plus an optional cross term.

    ``cross(g1, h2)`` is a bi-additive map into T; with it the pairing becomes
    ``sigma1 + sigma2 + cross(g1, h2) - cross(h1, g2)``, which breaks the
    tensor factorization (useful to see the check fail).
    """

    def __init__(self, g1, g2, cross: Callable[[Any, Any], CircleValue] | None = None):
        self.g1, self.g2, self.cross = g1, g2, cross
        self.exact = getattr(g1, "exact", True) and getattr(g2, "exact", True)
        self.name = f"({g1.name} + {g2.name})"

    def __eq__(self, o):
        return isinstance(o, DirectSum) and (o.g1, o.g2, o.cross) == (self.g1, self.g2, self.cross)

    def __hash__(self):
        return hash((DirectSum, self.g1, self.g2))

    def zero(self):
        return (self.g1.zero(), self.g2.zero())

    def add(self, a, b):
        return (self.g1.add(a[0], b[0]), self.g2.add(a[1], b[1]))

    def neg(self, a):
        return (self.g1.neg(a[0]), self.g2.neg(a[1]))

    def canonical(self, a):
        return (self.g1.canonical(a[0]), self.g2.canonical(a[1]))

    def sort_key(self, a):
        return (self.g1.sort_key(a[0]), self.g2.sort_key(a[1]))

    def pairing(self, a, b) -> CircleValue:
        v = self.g1.pairing(a[0], b[0]) + self.g2.pairing(a[1], b[1])
        if self.cross is not None:
            v = v + self.cross(a[0], b[1]) - self.cross(b[0], a[1])
        return v

    def random_element(self, rng, **kw):
        return (self.g1.random_element(rng, **kw), self.g2.random_element(rng, **kw))


class TensorElement:
    """Finite sum of ``W(g1) (x) W(g2)``; the product is taken factorwise."""

    def __init__(self, g1, g2, terms: Mapping | None = None):
        self.g1, self.g2 = g1, g2
        t: dict = {}
        for (a, b), c in (terms or {}).items():
            key = (g1.canonical(a), g2.canonical(b))
            t[key] = t.get(key, PhaseSum()) + _as_phasesum(c)
        self.terms = {k: v for k, v in t.items() if not v.is_zero()}

    def __mul__(self, o: "TensorElement") -> "TensorElement":
        t: dict = {}
        for (a1, a2), c in self.terms.items():
            for (b1, b2), d in o.terms.items():
                ph = self.g1.pairing(a1, b1) + self.g2.pairing(a2, b2)
                key = (self.g1.add(a1, b1), self.g2.add(a2, b2))
                t[key] = t.get(key, PhaseSum()) + (c * d).shift(ph.value)
        return TensorElement(self.g1, self.g2, t)

    def star(self) -> "TensorElement":
        return TensorElement(self.g1, self.g2, {(self.g1.neg(a), self.g2.neg(b)): c.conjugate()
                                               for (a, b), c in self.terms.items()})

    def norm1(self) -> float:
        return math.fsum(abs(c.value()) for c in self.terms.values())

    def __eq__(self, o):
        return isinstance(o, TensorElement) and o.terms == self.terms


def tensor_J(a: WeylElement) -> TensorElement:
    G = a.group
    return TensorElement(G.g1, G.g2, dict(a.terms))


def tensor_I(x: TensorElement, group: DirectSum) -> WeylElement:
    return WeylElement(group, dict(x.terms))


def iota(a: WeylElement, group: DirectSum, slot: int) -> WeylElement:
    """Embed a factor algebra into the direct-sum algebra."""
    terms = {}
    for g, c in a.terms.items():
        terms[(g, group.g2.zero()) if slot == 1 else (group.g1.zero(), g)] = c
    return WeylElement(group, terms)


def _random_tensor(g1, g2, rng, n_terms=3, **kw) -> TensorElement:
    t = {}
    for _ in range(n_terms):
        t[(g1.random_element(rng, **kw), g2.random_element(rng, **kw))] = complex(rng.randint(-3, 3), rng.randint(-3, 3))
    return TensorElement(g1, g2, t)


def tensor_factorization_check(g1, g2, n_samples: int = 100, seed: int = 0,
                               cross: Callable | None = None, **kw) -> dict:
    """Sampled checks that ``W(G1 + G2)`` factorizes as ``W(G1) (x) W(G2)``."""
    rng = random.Random(seed)
    S = DirectSum(g1, g2, cross)
    failures: dict[str, int] = {"commute": 0, "J_I": 0, "I_J": 0, "J_mul": 0, "J_star": 0, "norm": 0}
    for _ in range(n_samples):
        a = random_weyl(g1, rng, **kw)
        b = random_weyl(g2, rng, **kw)
        ia, ib = iota(a, S, 1), iota(b, S, 2)
        if weyl_mul(ia, ib) != weyl_mul(ib, ia):
            failures["commute"] += 1
        x = _random_tensor(g1, g2, rng, **kw)
        if tensor_J(tensor_I(x, S)) != x:
            failures["J_I"] += 1
        y, y2 = random_weyl(S, rng, **kw), random_weyl(S, rng, **kw)
        if tensor_I(tensor_J(y), S) != y:
            failures["I_J"] += 1
        if tensor_J(weyl_mul(y, y2)) != tensor_J(y) * tensor_J(y2):
            failures["J_mul"] += 1
        if tensor_J(weyl_star(y)) != tensor_J(y).star():
            failures["J_star"] += 1
        if tensor_J(y).norm1() > norm1(y) * (1 + 1e-12):
            failures["norm"] += 1
    return {"group": S.name, "samples": n_samples, "failures": failures,
            "pass": not any(failures.values())}


def duality_generators(group: ObservableGroup, elements: Iterable) -> list:
    return [duality_full(g, group.model, group.dyn) for g in elements]
