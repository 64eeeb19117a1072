"""Finitely generated abelian groups, their homomorphisms and circle-valued pairings.

Groups are given by an integer presentation matrix (relations x generators) and
normalized through the Smith normal form.  Elements live in the resulting
normal-form basis: first the cyclic factors ``Z/d`` with ``d > 1`` (coordinates
reduced into ``[0, d)``), then the free ``Z`` factors.

Values of the circle group ``T = R/Z`` are modelled by :class:`CircleValue`,
which is either an exact reduced fraction or a float carrying a tolerance.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral, Rational, Real
from typing import Iterable, Iterator, Sequence

IntMatrix = list[list[int]]

APPROX_TOL = 1e-9


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

def _as_int_matrix(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    rows = [[int(x) for x in row] for row in m]
    for row, src in zip(rows, m):
        for x, y in zip(row, src):
            if x != y:
                raise ValueError(f"non-integer matrix entry {y!r}")
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    return rows


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    """Plain matrix product; works for ints, Fractions and floats alike."""
    if not a:
        return []
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise ValueError("dimension mismatch in matrix product")
    ncols = len(b[0]) if b else 0
    return [[sum((row[k] * b[k][j] for k in range(inner)), 0) for j in range(ncols)] for row in a]


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def determinant(a: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse over Q.  Raises ``ZeroDivisionError`` when singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None
                      ) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ m @ V == S``.

    ``S`` is diagonal with non-negative entries ``d_1 | d_2 | ...`` followed by
    zeros; ``U`` and ``V`` are unimodular.  The pivot is always the nonzero
    entry of smallest absolute value in the remaining block, ties going to
    the lowest (row, column), so bases are reproducible.

    >>> smith_normal_form([[2, 0], [0, 3]])[1]
    [[1, 0], [0, 6]]
    """
    a = _as_int_matrix(m, ncols)
    nr = len(a)
    nc = ncols if ncols is not None else (len(a[0]) if a else 0)
    U = identity(nr)
    V = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    def smallest(cells):
        best = None
        for (i, j) in cells:
            x = abs(a[i][j])
            if x and (best is None or x < best[0]):
                best = (x, i, j)
        return best

    for t in range(min(nr, nc)):
        piv = smallest((i, j) for i in range(t, nr) for j in range(t, nc))
        if piv is None:
            break
        _, i, j = piv
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = smallest([(i, t) for i in range(t + 1, nr)] + [(t, j) for j in range(t + 1, nc)])
            if rest is not None:
                _, i, j = rest
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return U, a, V


def invariant_factors(S: IntMatrix) -> list[int]:
    """Nonzero diagonal of a Smith form."""
    out = []
    for i in range(min(len(S), len(S[0]) if S else 0)):
        if S[i][i]:
            out.append(S[i][i])
    return out


# ---------------------------------------------------------------------------
# the circle group
# ---------------------------------------------------------------------------

def _frac_mod1(x) -> Fraction:
    """Reduce an int or Fraction into [0, 1) without renormalizing."""
    if type(x) is int:
        return _ZERO
    n, d = x.numerator, x.denominator
    if 0 <= n < d:
        return x
    return Fraction(n % d, d, _normalize=False)


_ZERO = Fraction(0)


def _reduce_float(x: float) -> float:
    y = math.fmod(x, 1.0)
    if y < 0:
        y += 1.0
    if y >= 1.0:
        y = 0.0
    return y


@dataclass(frozen=True, eq=False)
class CircleValue:
    """An element of T = R/Z.

    Exact values are reduced fractions in [0, 1).  Floats are approximate and
    compare with wraparound distance against ``tol``.
    """

    value: Fraction | float
    exact: bool = True
    tol: float = APPROX_TOL

    def __post_init__(self):
        v = self.value
        if self.exact:
            if type(v) is Fraction or type(v) is int:
                object.__setattr__(self, "value", _frac_mod1(v))
                return
            if isinstance(v, float) or not isinstance(v, Rational):
                raise TypeError("exact CircleValue needs a rational value")
            v = Fraction(v)
            object.__setattr__(self, "value", v - math.floor(v))
        else:
            if self.tol > APPROX_TOL:
                raise ValueError("approximate CircleValue tolerance must be <= 1e-9")
            object.__setattr__(self, "value", _reduce_float(float(v)))

    @classmethod
    def of(cls, x) -> "CircleValue":
        t = type(x)
        if t is CircleValue:
            return x
        if t is Fraction or t is int:
            return cls(x)
        if isinstance(x, CircleValue):
            return x
        if isinstance(x, Rational) and not isinstance(x, bool | float):
            return cls(Fraction(x), True)
        if isinstance(x, bool):
            return cls(Fraction(int(x)), True)
        return cls(float(x), False)

    @classmethod
    def zero(cls) -> "CircleValue":
        return cls(Fraction(0))

    # arithmetic -----------------------------------------------------------
    def _combine(self, other, sign):
        o = CircleValue.of(other)
        if self.exact and o.exact:
            return CircleValue(self.value + sign * o.value)
        return CircleValue(float(self.value) + sign * float(o.value), False,
                           min(self.tol, o.tol))

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return CircleValue.of(other) - self

    def __neg__(self):
        if self.exact:
            return CircleValue(-self.value)
        return CircleValue(-self.value, False, self.tol)

    def __mul__(self, n):
        if not isinstance(n, Integral):
            raise TypeError("circle values can only be scaled by integers")
        if self.exact:
            return CircleValue(self.value * int(n))
        return CircleValue(self.value * int(n), False, self.tol)

    __rmul__ = __mul__

    # comparison -----------------------------------------------------------
    def distance(self, other) -> float:
        o = CircleValue.of(other)
        d = abs(float(self.value) - float(o.value))
        return min(d, 1.0 - d)

    def __eq__(self, other):
        try:
            o = CircleValue.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self.exact and o.exact:
            return self.value == o.value
        tol = self.tol if not self.exact else o.tol
        if not o.exact and not self.exact:
            tol = max(self.tol, o.tol)
        return self.distance(o) <= tol

    def __hash__(self):
        # approximate values cannot hash consistently with tolerance equality
        return hash(self.value) if self.exact else hash("approx-circle")

    def is_zero(self) -> bool:
        return self == 0

    def signed(self) -> Fraction | float:
        """Representative in (-1/2, 1/2]."""
        v = self.value
        return v - 1 if v > Fraction(1, 2) else v

    def phase(self) -> complex:
        """exp(2 pi i value); quarter turns are returned exactly."""
        return phase_of(self.value)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        if self.exact:
            return f"CircleValue({self.value})"
        return f"CircleValue({self.value!r}, approx)"


_QUARTER = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}


def phase_of(v) -> complex:
    if isinstance(v, Fraction):
        v = v - math.floor(v)
        hit = _QUARTER.get(v)
        if hit is not None:
            return hit
    return cmath.exp(2j * math.pi * float(v))


def circle_sum(values: Iterable) -> CircleValue:
    total = CircleValue.zero()
    for v in values:
        total = total + v
    return total


def pontryagin_pair(u: Sequence, z, pairing_matrix: Sequence[Sequence[int]]) -> CircleValue:
    """``(u^T P z) mod 1`` for a real (or rational) ``u`` and integral ``z``.

    >>> pontryagin_pair([Fraction(1, 4)], [1], [[1]])
    CircleValue(1/4)
    """
    zc = z.coords if isinstance(z, GroupElement) else tuple(z)
    u = list(u)
    rows = len(pairing_matrix)
    cols = len(pairing_matrix[0]) if rows else len(zc)
    if len(u) != rows or len(zc) != cols:
        raise ValueError(f"dimension mismatch: u has {len(u)}, z has {len(zc)}, "
                         f"pairing matrix is {rows}x{cols}")
    total = 0
    for i in range(rows):
        if not u[i]:
            continue
        s = sum(int(pairing_matrix[i][j]) * int(zc[j]) for j in range(cols))
        total = total + u[i] * s
    return CircleValue.of(total)


def real_pair(u: Sequence, z: Sequence, pairing_matrix: Sequence[Sequence]) -> Fraction | float:
    """Unreduced real value of ``u^T P z``."""
    total = 0
    for i, ui in enumerate(u):
        if ui:
            total = total + ui * sum(pairing_matrix[i][j] * z[j] for j in range(len(z)))
    return total


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group ``Z^ngens / rowspace(presentation)``."""

    presentation: tuple[tuple[int, ...], ...]
    ngens: int
    U: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    S: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    V: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    invariant_factors: tuple[int, ...] = field(compare=False)
    free_rank: int = field(compare=False)

    @classmethod
    def from_presentation(cls, matrix: Sequence[Sequence[int]], ngens: int | None = None) -> "FgAbGroup":
        rows = _as_int_matrix(matrix, ngens)
        if ngens is None:
            if not rows:
                raise ValueError("ngens is required for an empty presentation")
            ngens = len(rows[0])
        U, S, V = smith_normal_form(rows, ngens)
        d = invariant_factors(S)
        return cls(tuple(map(tuple, rows)), ngens, tuple(map(tuple, U)), tuple(map(tuple, S)),
                   tuple(map(tuple, V)), tuple(d), ngens - len(d))

    @classmethod
    def from_invariants(cls, torsion: Iterable[int] = (), free_rank: int = 0) -> "FgAbGroup":
        tors = [int(d) for d in torsion if int(d) != 1]
        if any(d <= 0 for d in tors):
            raise ValueError("invariant factors must be positive")
        for a, b in zip(tors, tors[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain, got {tors}")
        n = len(tors) + free_rank
        rows = [[d if i == j else 0 for j in range(n)] for i, d in enumerate(tors)]
        return cls.from_presentation(rows, n)

    # structure -------------------------------------------------------------
    @property
    def torsion_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    @property
    def rank(self) -> int:
        """Number of normal-form coordinates (cyclic factors plus free rank)."""
        return len(self.torsion_factors) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each coordinate; 0 marks a free coordinate."""
        return self.torsion_factors + (0,) * self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.rank == 0

    def order(self) -> int:
        if not self.is_finite():
            raise ValueError("infinite group")
        return math.prod(self.torsion_factors)

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    # elements --------------------------------------------------------------
    def element(self, coords: Iterable[int]) -> "GroupElement":
        c = tuple(int(x) for x in coords)
        if len(c) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates for {self.describe()}, got {len(c)}")
        c = tuple(x % d if d else x for x, d in zip(c, self.orders))
        return GroupElement(self, c)

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generator(self, i: int) -> "GroupElement":
        return self.element(int(j == i) for j in range(self.rank))

    def from_generators(self, x: Sequence[int]) -> "GroupElement":
        """Element given in the original generators of the presentation."""
        if len(x) != self.ngens:
            raise ValueError("wrong number of generator coordinates")
        y = [sum(int(x[i]) * self.V[i][j] for i in range(self.ngens)) for j in range(self.ngens)]
        nd = len(self.invariant_factors)
        keep = [y[j] for j in range(nd) if self.invariant_factors[j] > 1] + y[nd:]
        return self.element(keep)

    def to_generators(self, e: "GroupElement") -> tuple[int, ...]:
        """A representative of ``e`` in the original generators."""
        Vinv = inverse(self.V)
        nd = len(self.invariant_factors)
        full = []
        it = iter(e.coords)
        for j in range(self.ngens):
            if j < nd and self.invariant_factors[j] == 1:
                full.append(0)
            else:
                full.append(next(it))
        out = [sum(full[j] * Vinv[j][i] for j in range(self.ngens)) for i in range(self.ngens)]
        return tuple(int(v) for v in out)

    def elements(self) -> Iterator["GroupElement"]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for c in itertools.product(*(range(d) for d in self.torsion_factors)):
            yield GroupElement(self, tuple(c))


@dataclass(frozen=True)
class GroupElement:
    group: FgAbGroup = field(repr=False)
    coords: tuple[int, ...]

    def _check(self, other: "GroupElement"):
        if self.group != other.group or self.group.orders != other.group.orders:
            raise ValueError("elements of different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "GroupElement":
        return self.group.element(-a for a in self.coords)

    def __mul__(self, n: int) -> "GroupElement":
        return self.group.element(int(n) * a for a in self.coords)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by an integer matrix on normal-form coordinates.

    ``matrix`` has shape ``target.rank x source.rank`` and acts on column
    vectors.  It must send every torsion relation of the source to zero.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(m) != self.target.rank or any(len(r) != self.source.rank for r in m):
            raise ValueError("homomorphism matrix has the wrong shape")
        object.__setattr__(self, "matrix", m)
        for i, d in enumerate(self.source.orders):
            if not d:
                continue
            for j, e in enumerate(self.target.orders):
                v = d * m[j][i]
                if (e and v % e) or (not e and v):
                    raise ValueError(f"not well defined: relation {d}*g{i} does not map to zero")

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise ValueError("element not in the source group")
        return self.target.element(sum(row[i] * x.coords[i] for i in range(len(x.coords)))
                                   for row in self.matrix)


def free_torsion_split(g: FgAbGroup) -> tuple[FgAbGroup, FgAbGroup, GroupHom]:
    """Split ``g`` as torsion part plus free part.

    Returns ``(free, tor, section)`` where ``section: free -> g`` is the
    coordinate inclusion of the free normal-form directions.
    """
    free = FgAbGroup.from_invariants((), g.free_rank)
    tor = FgAbGroup.from_invariants(g.torsion_factors, 0)
    nt = len(g.torsion_factors)
    rows = [[0] * g.free_rank for _ in range(nt)]
    rows += [[int(i == j) for j in range(g.free_rank)] for i in range(g.free_rank)]
    return free, tor, GroupHom(free, g, tuple(map(tuple, rows)))


def free_quotient(g: FgAbGroup) -> GroupHom:
    """The projection ``g -> g / tor``."""
    free = FgAbGroup.from_invariants((), g.free_rank)
    nt = len(g.torsion_factors)
    rows = [[int(j == nt + i) for j in range(g.rank)] for i in range(g.free_rank)]
    return GroupHom(g, free, tuple(map(tuple, rows)))


def torsion_inclusion(g: FgAbGroup) -> GroupHom:
    tor = FgAbGroup.from_invariants(g.torsion_factors, 0)
    nt = len(g.torsion_factors)
    rows = [[int(i == j) for j in range(nt)] for i in range(g.rank)]
    return GroupHom(tor, g, tuple(map(tuple, rows)))


def as_rational(x) -> Fraction | float:
    """Keep ints/Fractions exact, pass floats through."""
    t = type(x)
    if t is Fraction or t is float:
        return x
    if t is int:
        return Fraction(x)
    if isinstance(x, Rational) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, Real):
        return float(x)
    raise TypeError(f"not a real number: {x!r}")


def reduce_mod1(x) -> Fraction | float:
    if type(x) is Fraction or type(x) is int:
        return _frac_mod1(x)
    x = as_rational(x)
    if isinstance(x, Fraction):
        return x - math.floor(x)
    return _reduce_float(x)
