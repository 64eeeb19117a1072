"""Dynamical sector on the Lorentz cylinder R x S^1 (m = 2, k = 1).

Conventions
-----------
* The circle has length 1; theta-modes are ``e^{2 pi i q theta}`` with
  Laplacian eigenvalue ``(2 pi q)^2``.
* Metric ``-dt^2 + dtheta^2``, orientation ``dt ^ dtheta``.
* Time Fourier transform ``F(w) = int e^{-2 pi i w t} f(t) dt``.
* Codifferential on 1-forms: ``delta(rho_t dt + rho_th dtheta) = d_t rho_t - d_theta rho_th``,
  so that ``int g(d phi, rho) = int phi delta rho``.
* Hodge star: ``*1 = dt^dtheta``, ``*dt = -dtheta``, ``*dtheta = -dt``,
  ``*(dt^dtheta) = -1``.  This is the star with ``a ^ *b = g(a, b) vol``;
  it gives ``** = +1`` on 1-forms and ``-1`` on 0- and 2-forms.

A :class:`TestForm` is a finite list of entries ``(component, q, c, profile)``
meaning ``c * profile(t) * e^{2 pi i q theta}`` times ``dt`` or ``dtheta``.
"""
from __future__ import annotations

import cmath
import functools
import json
import math
import random
import warnings
from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
from numpy.polynomial.hermite_e import hermeval
from scipy import integrate

from .fgab import CircleValue
from .sectors import _cached_hash

TWO_PI = 2 * math.pi
DEFAULT_MODES = 64
COMPONENTS = ("dt", "dtheta")


# ---------------------------------------------------------------------------
# time profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianProfile:
    """``amplitude * exp(-(t - center)^2 / (2 width^2))``, differentiated ``order`` times."""

    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0
    order: int = 0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("gaussian width must be positive")
        if self.order < 0:
            raise ValueError("derivative order must be >= 0")

    kind = "gaussian"
    __hash__ = _cached_hash

    def derivative(self, n: int = 1) -> "GaussianProfile":
        return replace(self, order=self.order + n)

    def shifted(self, tau: float) -> "GaussianProfile":
        return replace(self, center=self.center + tau)

    def value(self, t):
        x = (np.asarray(t, dtype=float) - self.center) / self.width
        coeffs = [0] * self.order + [1]
        return (self.amplitude * (-1 / self.width) ** self.order
                * hermeval(x, coeffs) * np.exp(-x * x / 2))

    def ft(self, w: float) -> tuple[complex, float]:
        s = self.width
        base = (self.amplitude * s * math.sqrt(TWO_PI) * math.exp(-2 * math.pi ** 2 * s * s * w * w)
                * cmath.exp(-2j * math.pi * w * self.center))
        return base * (2j * math.pi * w) ** self.order, 0.0

    def moment(self, j: int) -> float:
        """``int t^j f(t) dt`` for j = 0, 1."""
        m0 = self.amplitude * self.width * math.sqrt(TWO_PI)
        return _moment(j, self.order, m0, self.center * m0)

    def support(self) -> tuple[float, float]:
        r = 12 * self.width
        return self.center - r, self.center + r

    def sort_key(self):
        return (0, self.center, self.width, self.amplitude, self.order)

    def to_json(self) -> dict:
        return {"kind": "gaussian", "center": self.center, "width": self.width,
                "amplitude": self.amplitude, "order": self.order}


@dataclass(frozen=True)
class BumpProfile:
    """``amplitude * cos^2(pi (t - c) / L)`` on ``[a, b]``, ``c`` the midpoint and ``L = b - a``.

    The bump is C^1, so pointwise derivatives are available up to order 2;
    Fourier transforms of higher derivatives are taken in the distributional
    sense, ``(2 pi i w)^order F(w)``.
    """

    a: float = -1.0
    b: float = 1.0
    amplitude: float = 1.0
    order: int = 0

    kind = "bump"
    __hash__ = _cached_hash

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("bump support needs a < b")
        if self.order < 0:
            raise ValueError("derivative order must be >= 0")

    def derivative(self, n: int = 1) -> "BumpProfile":
        return replace(self, order=self.order + n)

    def shifted(self, tau: float) -> "BumpProfile":
        return replace(self, a=self.a + tau, b=self.b + tau)

    def value(self, t):
        if self.order > 2:
            raise ValueError("pointwise bump derivatives beyond order 2 are distributions")
        t = np.asarray(t, dtype=float)
        L, c = self.b - self.a, (self.a + self.b) / 2
        x = TWO_PI * (t - c) / L
        if self.order == 0:
            v = self.amplitude * np.cos(x / 2) ** 2
        else:
            v = 0.5 * self.amplitude * (TWO_PI / L) ** self.order * np.cos(x + self.order * math.pi / 2)
        return np.where((t >= self.a) & (t <= self.b), v, 0.0)

    def ft(self, w: float) -> tuple[complex, float]:
        val, err = _bump_ft(self.a, self.b, self.amplitude, float(w))
        mult = (2j * math.pi * w) ** self.order
        return val * mult, err * abs(mult)

    def moment(self, j: int) -> float:
        m0 = self.amplitude * (self.b - self.a) / 2
        return _moment(j, self.order, m0, (self.a + self.b) / 2 * m0)

    def support(self) -> tuple[float, float]:
        return self.a, self.b

    def sort_key(self):
        return (1, self.a, self.b, self.amplitude, self.order)

    def to_json(self) -> dict:
        return {"kind": "bump", "support": [self.a, self.b], "amplitude": self.amplitude, "order": self.order}


Profile = GaussianProfile | BumpProfile


def _moment(j: int, order: int, m0: float, m1: float) -> float:
    # int t^j f^(d) dt by parts: only d = 0 (both) and d = 1 (j = 1) survive
    if j == 0:
        return m0 if order == 0 else 0.0
    if j == 1:
        return m1 if order == 0 else (-m0 if order == 1 else 0.0)
    raise ValueError("only moments 0 and 1 are needed")


@functools.lru_cache(maxsize=4096)
def _bump_ft(a: float, b: float, amp: float, w: float) -> tuple[complex, float]:
    L, c = b - a, (a + b) / 2

    def f(t):
        return amp * math.cos(math.pi * (t - c) / L) ** 2

    opts = dict(epsabs=1e-13, epsrel=1e-13, limit=200)
    if w == 0:
        v, e = integrate.quad(f, a, b, **opts)
        return complex(v), e
    re, e1 = integrate.quad(f, a, b, weight="cos", wvar=TWO_PI * w, **opts)
    im, e2 = integrate.quad(f, a, b, weight="sin", wvar=TWO_PI * w, **opts)
    return complex(re, -im), e1 + e2


def profile_from_json(d: Mapping) -> Profile:
    kind = d.get("kind")
    if kind == "gaussian":
        return GaussianProfile(float(d.get("center", 0.0)), float(d.get("width", 1.0)),
                               float(d.get("amplitude", 1.0)), int(d.get("order", 0)))
    if kind == "bump":
        a, b = d.get("support", (-1.0, 1.0))
        return BumpProfile(float(a), float(b), float(d.get("amplitude", 1.0)), int(d.get("order", 0)))
    raise ValueError(f"unknown profile kind {kind!r}")


# ---------------------------------------------------------------------------
# test forms
# ---------------------------------------------------------------------------

Entry = tuple  # (component, q, coefficient, profile)


def _merge(entries: Iterable[Entry]) -> tuple[Entry, ...]:
    acc: dict = {}
    for comp, q, c, prof in entries:
        if comp not in COMPONENTS:
            raise ValueError(f"component must be one of {COMPONENTS}, got {comp!r}")
        key = (comp, int(q), prof)
        acc[key] = acc.get(key, 0j) + complex(c)
    out = [(comp, q, c, prof) for (comp, q, prof), c in acc.items() if c != 0]
    out.sort(key=lambda e: (e[0], e[1], e[3].sort_key()))
    return tuple(out)


@dataclass(frozen=True)
class TestForm:
    """Compactly localized 1-form given by finitely many spatial modes."""

    __test__ = False  # not a pytest class

    entries: tuple = ()
    real: bool = True

    __hash__ = _cached_hash

    def __post_init__(self):
        ent = _merge(self.entries)
        object.__setattr__(self, "entries", ent)
        if self.real:
            table = {(c, q, p): v for c, q, v, p in ent}
            for (c, q, p), v in table.items():
                w = table.get((c, -q, p), 0j)
                if abs(w - v.conjugate()) > 1e-12 * max(1.0, abs(v)):
                    raise ValueError(f"real test form needs conjugate coefficients for modes +-{abs(q)} "
                                     f"of the {c} component")

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "TestForm":
        return cls(())

    @classmethod
    def cos_mode(cls, profile: Profile, n: int = 1, component: str = "dtheta", amplitude: float = 1.0) -> "TestForm":
        """``amplitude * f(t) cos(2 pi n theta)`` times ``dtheta`` (or ``dt``)."""
        if n == 0:
            return cls(((component, 0, amplitude, profile),))
        return cls(((component, n, amplitude / 2, profile), (component, -n, amplitude / 2, profile)))

    @classmethod
    def sin_mode(cls, profile: Profile, n: int = 1, component: str = "dtheta", amplitude: float = 1.0) -> "TestForm":
        if n == 0:
            return cls.zero()
        return cls(((component, n, -0.5j * amplitude, profile), (component, -n, 0.5j * amplitude, profile)))

    @classmethod
    def exact(cls, phi: Sequence[tuple[int, complex, Profile]], real: bool = True) -> "TestForm":
        """``d phi`` for ``phi = sum c g(t) e^{2 pi i q theta}``."""
        ent = []
        for q, c, g in phi:
            ent.append(("dt", q, c, g.derivative()))
            ent.append(("dtheta", q, 2j * math.pi * q * c, g))
        return cls(tuple(ent), real)

    @classmethod
    def coexact(cls, beta: Sequence[tuple[int, complex, Profile]], real: bool = True) -> "TestForm":
        """``delta beta`` for ``beta = sum c b(t) e^{2 pi i q theta} dt ^ dtheta``."""
        ent = []
        for q, c, b in beta:
            ent.append(("dtheta", q, c, b.derivative()))
            ent.append(("dt", q, 2j * math.pi * q * c, b))
        return cls(tuple(ent), real)

    # arithmetic ------------------------------------------------------------
    def __add__(self, o: "TestForm") -> "TestForm":
        if self.real and o.real:
            # a sum of real forms is real; skip the conjugate-pair check
            out = object.__new__(TestForm)
            object.__setattr__(out, "entries", _merge(self.entries + o.entries))
            object.__setattr__(out, "real", True)
            return out
        return TestForm(self.entries + o.entries, self.real and o.real)

    def __neg__(self) -> "TestForm":
        return TestForm(tuple((c, q, -v, p) for c, q, v, p in self.entries), self.real)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, s: float) -> "TestForm":
        s = complex(s)
        return TestForm(tuple((c, q, s * v, p) for c, q, v, p in self.entries), self.real and s.imag == 0)

    def shifted(self, tau: float) -> "TestForm":
        """``rho(t - tau, theta)``."""
        return TestForm(tuple((c, q, v, p.shifted(tau)) for c, q, v, p in self.entries), self.real)

    def is_zero(self) -> bool:
        return not self.entries

    def max_mode(self) -> int:
        return max((abs(q) for _, q, _, _ in self.entries), default=0)

    def sort_key(self):
        return tuple((c, q, p.sort_key(), v.real, v.imag) for c, q, v, p in self.entries)

    # pointwise -------------------------------------------------------------
    def component_value(self, component: str, t: float, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta, dtype=complex)
        for c, q, v, p in self.entries:
            if c == component:
                out = out + v * complex(p.value(t)) * np.exp(2j * math.pi * q * theta)
        return out

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        comps = []
        for comp in COMPONENTS:
            modes = [{"n": q, "coeff_re": v.real, "coeff_im": v.imag, "profile": p.to_json()}
                     for c, q, v, p in self.entries if c == comp]
            if modes:
                comps.append({"component": comp, "modes": modes})
        return {"components": comps, "real": self.real}

    @classmethod
    def from_json(cls, data: Any) -> "TestForm":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, Mapping) and "components" in data:
            comps, real = data["components"], bool(data.get("real", True))
        elif isinstance(data, Mapping):
            comps, real = [data], bool(data.get("real", True))
        else:
            comps, real = list(data), True
        ent = []
        for comp in comps:
            name = comp["component"]
            for mode in comp["modes"]:
                ent.append((name, int(mode["n"]), complex(mode.get("coeff_re", 0.0), mode.get("coeff_im", 0.0)),
                            profile_from_json(mode["profile"])))
        return cls(tuple(ent), real)


def random_test_form(rng: random.Random, max_mode: int = 3, n_modes: int = 2,
                     kind: str = "gaussian", components: Sequence[str] = COMPONENTS) -> TestForm:
    """Seeded real test form with a few spatial modes."""
    ent = []
    for _ in range(n_modes):
        comp = rng.choice(list(components))
        q = rng.randint(1, max_mode)
        c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if kind == "gaussian":
            prof: Profile = GaussianProfile(round(rng.uniform(-1, 1), 3), round(rng.uniform(0.15, 0.6), 3),
                                            round(rng.uniform(0.5, 2.0), 3))
        else:
            a = round(rng.uniform(-1.5, 0), 3)
            prof = BumpProfile(a, a + round(rng.uniform(0.5, 2.0), 3), round(rng.uniform(0.5, 2.0), 3))
        ent += [(comp, q, c, prof), (comp, -q, c.conjugate(), prof)]
    return TestForm(tuple(ent))


# ---------------------------------------------------------------------------
# codifferential and mode data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeData:
    """A scalar field ``sum_q sum c f(t) e^{2 pi i q theta}`` stored per spatial mode."""

    modes: Mapping[int, tuple[tuple[complex, Profile], ...]]

    def hat(self, nu: float, m: int) -> tuple[complex, float, float]:
        """``int dt int dtheta e^{-2 pi i nu t} e^{2 pi i m theta} f``: (value, quad error, magnitude)."""
        cache = self.__dict__.setdefault("_hat", {})
        hit = cache.get((nu, m))
        if hit is not None:
            return hit
        re, im, err, mag = [], [], 0.0, 0.0
        for c, p in self.modes.get(-m, ()):
            v, e = p.ft(nu)
            term = c * v
            re.append(term.real)
            im.append(term.imag)
            err += abs(c) * e
            mag += abs(term)
        out = cache[(nu, m)] = complex(math.fsum(re), math.fsum(im)), err, mag
        return out

    def moment(self, j: int) -> complex:
        return sum((c * p.moment(j) for c, p in self.modes.get(0, ())), 0j)

    def value(self, t: float, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta, dtype=complex)
        for q, terms in self.modes.items():
            for c, p in terms:
                out = out + c * complex(p.value(t)) * np.exp(2j * math.pi * q * theta)
        return out

    def max_mode(self) -> int:
        return max((abs(q) for q in self.modes), default=0)


def _collect(pairs: Iterable[tuple[int, complex, Profile]]) -> ModeData:
    acc: dict[int, dict] = {}
    for q, c, p in pairs:
        d = acc.setdefault(q, {})
        d[p] = d.get(p, 0j) + c
    return ModeData({q: tuple((c, p) for p, c in sorted(d.items(), key=lambda kv: kv[0].sort_key()) if c != 0)
                     for q, d in sorted(acc.items())})


def codifferential(rho: TestForm) -> ModeData:
    """``delta rho = d_t rho_t - d_theta rho_theta`` as a 0-form."""
    pairs = []
    for comp, q, c, p in rho.entries:
        if comp == "dtheta":
            if q != 0:
                pairs.append((q, -2j * math.pi * q * c, p))
        else:
            pairs.append((q, c, p.derivative()))
    return _collect(pairs)


def _unit_codifferential(e: Entry) -> tuple[complex, Profile]:
    comp, q, _, p = e
    if comp == "dtheta":
        return -2j * math.pi * q, p
    return 1.0, p.derivative()


def curl(rho: TestForm) -> ModeData:
    """``F`` with ``d rho = F dt ^ dtheta``: ``F = d_t rho_theta - d_theta rho_t``."""
    pairs = []
    for comp, q, c, p in rho.entries:
        if comp == "dtheta":
            pairs.append((q, c, p.derivative()))
        elif q != 0:
            pairs.append((q, -2j * math.pi * q * c, p))
    return _collect(pairs)


# ---------------------------------------------------------------------------
# two-point function and symplectic form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoPointResult:
    value: complex
    truncation: int
    tail_bound: float
    quadrature_error: float
    scale: float


def _check_modes(N: int):
    if int(N) != N or N <= 0:
        raise ValueError(f"mode truncation must be a positive integer, got {N}")


def _mode_term(a: ModeData, b: ModeData, n: int):
    h1, e1, m1 = a.hat(n, n)
    h2, e2, m2 = b.hat(-n, -n)
    h3, e3, m3 = a.hat(n, -n)
    h4, e4, m4 = b.hat(-n, n)
    w = 1 / (4 * math.pi * n)
    val = w * (h1 * h2 + h3 * h4)
    err = w * (e1 * (abs(h2) + e2) + e2 * abs(h1) + e3 * (abs(h4) + e4) + e4 * abs(h3))
    return val, err, w * (m1 * m2 + m3 * m4)


def two_point(rho: TestForm, rho_prime: TestForm, N: int = DEFAULT_MODES) -> TwoPointResult:
    """Mode sum over n = 1..N of ``(hat(n,n) hat'(-n,-n) + hat(n,-n) hat'(-n,n)) / (4 pi n)``."""
    _check_modes(N)
    a, b = codifferential(rho), codifferential(rho_prime)
    top = min(a.max_mode(), b.max_mode())
    re, im, qerr, scale = [], [], 0.0, 0.0
    for n in range(1, min(N, top) + 1):
        v, e, s = _mode_term(a, b, n)
        re.append(v.real)
        im.append(v.imag)
        qerr += e
        scale += s
    # finitely many spatial modes: the omitted terms are computed, not estimated
    tail = 0.0
    for n in range(N + 1, top + 1):
        v, e, s = _mode_term(a, b, n)
        tail += abs(v) + e
        scale += s
    return TwoPointResult(complex(math.fsum(re), math.fsum(im)), int(N), tail, qerr, scale)


def two_point_positive_form(rho: TestForm, N: int = DEFAULT_MODES) -> float:
    """``omega_2(rho, rho)`` for real rho written as ``sum |.|^2 / (4 pi n)``."""
    _check_modes(N)
    a = codifferential(rho)
    terms = []
    for n in range(1, min(N, a.max_mode()) + 1):
        terms.append((abs(a.hat(-n, -n)[0]) ** 2 + abs(a.hat(-n, n)[0]) ** 2) / (4 * math.pi * n))
    return math.fsum(terms)


def _sine_kernel_sum(a: ModeData, b: ModeData, N: int) -> float:
    """``int dt sum_q a_{-q}(t) int dt' sin(2 pi |q| (t - t')) / (2 pi |q|) b_q(t')``."""
    terms = []
    top = min(N, a.max_mode(), b.max_mode())
    for q in sorted(set(a.modes) | set(b.modes)):
        n = abs(q)
        if q == 0 or n > top:
            continue
        # a_{-q} hat at nu is a.hat(nu, q); b_q hat at nu is b.hat(nu, -q)
        x = a.hat(-n, q)[0] * b.hat(n, -q)[0] - a.hat(n, q)[0] * b.hat(-n, -q)[0]
        terms.append((x / (2j) / (TWO_PI * n)).real)
    return math.fsum(terms)


def tau_dyn(rho: TestForm, rho_prime: TestForm, N: int = DEFAULT_MODES, method: str = "codifferential") -> float:
    """Symplectic form of the dynamical sector from the causal propagator.

    ``codifferential``: ``int delta rho * G delta rho'``;
    ``curl``: ``-int d rho ^ * G d rho'`` including the harmonic (zero-mode)
    kernel ``t - t'``.
    """
    _check_modes(N)
    if method == "codifferential":
        return _sine_kernel_sum(codifferential(rho), codifferential(rho_prime), N)
    if method == "curl":
        F, Fp = curl(rho), curl(rho_prime)
        harmonic = F.moment(1) * Fp.moment(0) - F.moment(0) * Fp.moment(1)
        return _sine_kernel_sum(F, Fp, N) + harmonic.real
    raise ValueError(f"unknown method {method!r}")


def duality_dyn(rho: TestForm) -> TestForm:
    """``rho -> (-1)^{k(m-k)} * rho = -*rho``, which swaps the dt and dtheta components."""
    swap = {"dt": "dtheta", "dtheta": "dt"}
    return TestForm(tuple((swap[c], q, v, p) for c, q, v, p in rho.entries), rho.real)


def hodge_star_1form(rho: TestForm) -> TestForm:
    swap = {"dt": "dtheta", "dtheta": "dt"}
    return TestForm(tuple((swap[c], q, -v, p) for c, q, v, p in rho.entries), rho.real)


# ---------------------------------------------------------------------------
# independent quadrature oracle
# ---------------------------------------------------------------------------

def _cquad(f, lo: float, hi: float) -> complex:
    """Complex integral of ``f(t, part)`` with part 0/1 selecting real/imaginary parts."""
    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=400)
    with warnings.catch_warnings():
        # roundoff warnings appear when the integrand is ~1e-17 everywhere
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return complex(integrate.quad(f, lo, hi, args=(0,), **opts)[0],
                       integrate.quad(f, lo, hi, args=(1,), **opts)[0])


def _theta_coefficients(rho: TestForm, t: float, Q: int, samples: int = 64) -> dict[int, complex]:
    """Spatial Fourier coefficients of ``delta rho(t, .)`` from pointwise samples.

    The dtheta component is sampled and differentiated spectrally; the dt
    component uses the pointwise time derivative of its profile.
    """
    theta = np.arange(samples) / samples
    rth = rho.component_value("dtheta", t, theta)
    rt_dot = np.zeros(samples, dtype=complex)
    for c, q, v, p in rho.entries:
        if c == "dt":
            rt_dot = rt_dot + v * complex(p.derivative().value(t)) * np.exp(2j * math.pi * q * theta)
    k = np.fft.fftfreq(samples, d=1 / samples)
    dth = np.fft.ifft(2j * math.pi * k * np.fft.fft(rth))
    field = rt_dot - dth
    coeffs = np.fft.fft(field) / samples
    return {q: coeffs[q % samples] for q in range(-Q, Q + 1)}


def two_point_quadrature(rho: TestForm, rho_prime: TestForm, samples: int = 64) -> complex:
    """``W_perp(delta rho, delta rho')`` by direct quadrature of the kernel
    ``exp(-i sqrt(Lap) (t - t')) / (2 sqrt(Lap))``; the double time integral
    factorizes into two 1-D integrals per spatial mode."""
    Q = max(rho.max_mode(), rho_prime.max_mode())

    def bounds(form):
        lo = min((p.support()[0] for *_, p in form.entries), default=0.0)
        hi = max((p.support()[1] for *_, p in form.entries), default=0.0)
        return lo, hi

    def transform(form, q, sign):
        lo, hi = bounds(form)
        w = TWO_PI * abs(q)

        def f(t, part):
            v = _theta_coefficients(form, t, Q, samples)[q] * cmath.exp(sign * 1j * w * t)
            return v.real if part == 0 else v.imag

        return _cquad(f, lo, hi)

    total = []
    for q in range(-Q, Q + 1):
        if q == 0:
            continue
        # <a(t), K a'(t')> = sum_q a_{-q}(t) a'_q(t') e^{-i w (t - t')} / (2 w)
        left = transform(rho, -q, -1)
        right = transform(rho_prime, q, +1)
        total.append(left * right / (2 * TWO_PI * abs(q)))
    return complex(math.fsum(z.real for z in total), math.fsum(z.imag for z in total))


def tau_quadrature(rho: TestForm, rho_prime: TestForm, samples: int = 64) -> float:
    """``int int <delta rho(t), sin(sqrt(Lap)(t - t'))/sqrt(Lap) delta rho'(t')>`` by quadrature."""
    Q = max(rho.max_mode(), rho_prime.max_mode())
    total = []
    for q in range(-Q, Q + 1):
        if q == 0:
            continue
        w = TWO_PI * abs(q)

        def moment(form, mode, fn):
            lo = min(p.support()[0] for *_, p in form.entries)
            hi = max(p.support()[1] for *_, p in form.entries)

            def f(t, part):
                v = _theta_coefficients(form, t, Q, samples)[mode] * fn(w * t)
                return v.real if part == 0 else v.imag

            return _cquad(f, lo, hi)

        # sin(w(t - t')) = sin(wt) cos(wt') - cos(wt) sin(wt')
        s1, c1 = moment(rho, -q, math.sin), moment(rho, -q, math.cos)
        s2, c2 = moment(rho_prime, q, math.sin), moment(rho_prime, q, math.cos)
        total.append(((s1 * c2 - c1 * s2) / w).real)
    return math.fsum(total)


# ---------------------------------------------------------------------------
# ground state structure
# ---------------------------------------------------------------------------

def ground_state_check(rho_pairs: Sequence[tuple[TestForm, TestForm]], N: int = DEFAULT_MODES,
                       samples: int | None = None) -> dict:
    """Frequency content of ``tau -> omega_2(rho_tau (x) rho')``.

    A ground state gives only ``e^{-2 pi i n tau}`` with ``n > 0``.
    """
    _check_modes(N)
    rows = []
    worst_leak, worst_rel, worst_shift = 0.0, 0.0, 0.0
    for rho, rp in rho_pairs:
        top = max(rho.max_mode(), rp.max_mode(), 1)
        J = samples or max(16, 4 * top + 4)
        vals = np.array([two_point(rho.shifted(j / J), rp, N).value for j in range(J)])
        X = np.fft.fft(vals) / J
        # coefficient of e^{-2 pi i n tau} sits at index -n mod J
        coeff = {n: X[(-n) % J] for n in range(-(J // 2) + 1, J // 2 + 1)}
        pos = max((abs(v) for n, v in coeff.items() if n > 0), default=0.0)
        leak = max((abs(v) for n, v in coeff.items() if n <= 0), default=0.0)
        base = two_point(rho, rp, N).value
        shift = max(abs(two_point(rho.shifted(s), rp.shifted(s), N).value - base) for s in (0.37, -1.25, 2.5))
        worst_leak = max(worst_leak, leak)
        worst_rel = max(worst_rel, leak / pos if pos > 0 else 0.0)
        worst_shift = max(worst_shift, shift)
        peak = max(coeff, key=lambda n: abs(coeff[n]))
        rows.append({"samples": J, "peak_frequency": peak if pos > 0 else None,
                     "positive_amplitude": pos, "negative_leak": leak, "translation_defect": shift})
    return {"pairs": rows, "max_negative_leak": worst_leak, "max_relative_leak": worst_rel,
            "max_translation_defect": worst_shift}


# ---------------------------------------------------------------------------
# the dynamical sector as a presymplectic group, and omega_Dyn
# ---------------------------------------------------------------------------

class CylinderDynSector:
    """``Dyn^1(R x S^1)`` with elements represented by real test forms."""

    exact = False

    def __init__(self, N: int = DEFAULT_MODES, max_mode: int = 3, kind: str = "gaussian"):
        _check_modes(N)
        self.N, self.max_mode, self.kind = N, max_mode, kind
        self.name = f"Dyn[cylinder N={N}]"
        self._tau: dict = {}

    def __eq__(self, o):
        return isinstance(o, CylinderDynSector) and o.N == self.N

    def __hash__(self):
        return hash((CylinderDynSector, self.N))

    def zero(self) -> TestForm:
        return TestForm.zero()

    def add(self, a: TestForm, b: TestForm) -> TestForm:
        return a + b

    def neg(self, a: TestForm) -> TestForm:
        return -a

    def canonical(self, a: TestForm) -> TestForm:
        if not isinstance(a, TestForm):
            raise TypeError("dynamical elements are TestForm instances")
        return a

    def sort_key(self, a: TestForm):
        return a.sort_key()

    def _kernel(self, e: Entry, f: Entry) -> complex:
        # tau is bilinear, so pairings are assembled from unit entries; a unit entry
        # has a single-mode codifferential alpha * P(t) e^{2 pi i q theta}
        key = (e[0], e[1], e[3], f[0], f[1], f[3])
        v = self._tau.get(key)
        if v is None:
            n = abs(f[1])
            if n == 0 or n > self.N:
                v = 0j
            else:
                (ae, pe), (af, pf) = _unit_codifferential(e), _unit_codifferential(f)
                x = pe.ft(-n)[0] * pf.ft(n)[0] - pe.ft(n)[0] * pf.ft(-n)[0]
                v = ae * af * x / (2j) / (TWO_PI * n)
            self._tau[key] = v
        return v

    def real_pairing(self, a: TestForm, b: TestForm) -> float:
        terms = [e[2] * f[2] * self._kernel(e, f) for e in a.entries for f in b.entries if e[1] == -f[1]]
        return math.fsum(t.real for t in terms)

    def pairing(self, a: TestForm, b: TestForm) -> CircleValue:
        return CircleValue.of(self.real_pairing(a, b))

    def random_element(self, rng: random.Random, **_) -> TestForm:
        return random_test_form(rng, self.max_mode, rng.randint(1, 2), self.kind)

    def dual(self) -> "CylinderDynSector":
        return self

    def duality(self, a: TestForm) -> TestForm:
        return duality_dyn(a)


def omega_dyn(group: CylinderDynSector):
    """``W(rho) -> exp(-2 pi omega_2(rho, rho))``."""
    from .weyl import StateFunctional

    def gen(rho: TestForm):
        return math.exp(-2 * math.pi * two_point(rho, rho, group.N).value.real)

    return StateFunctional("omega_dyn", group, gen)


def omega_dyn_eval(a, N: int = DEFAULT_MODES) -> complex:
    group = a.group if a.group.N == N else CylinderDynSector(N)
    if group is not a.group:
        from .weyl import WeylElement
        a = WeylElement(group, dict(a.terms))
    return omega_dyn(group)(a)
