"""Exact lattice arithmetic and polarized surface data.

Divisor classes are plain tuples of Python ints holding coordinates in the
lattice basis.  Nothing in this module touches floating point.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class LatticeError(ValueError):
    """Malformed lattice or class input (wrong shapes, non-integers)."""


class InvalidSurface(ValueError):
    """Raised by :func:`validate_surface`; carries every violated invariant.

    ``violations`` is a list of ``(code, message)`` pairs where ``code`` is one
    of ``OddLattice``, ``WrongSignature``, ``DegenerateForm``, ``HNotPositive``,
    ``HOnWall``, ``BadNodalClass`` or ``WrongEnriquesLattice``.
    """

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = violations
        super().__init__("; ".join(f"{code}: {msg}" for code, msg in violations))

    @property
    def codes(self) -> list[str]:
        return [code for code, _ in self.violations]


class SurfaceKind(str, enum.Enum):
    K3 = "k3"
    ENRIQUES = "enriques"


class Effectivity(str, enum.Enum):
    EFFECTIVE = "Effective"
    NOT_EFFECTIVE = "NotEffective"
    INDETERMINATE = "Indeterminate"


def as_vector(x: Iterable[int]) -> Vector:
    out = []
    for a in x:
        if isinstance(a, bool) or not isinstance(a, int):
            raise LatticeError(f"class coordinates must be integers, got {a!r}")
        out.append(a)
    return tuple(out)


def ldl_pivots(matrix: Sequence[Sequence[int | Fraction]]) -> list[Fraction]:
    """Diagonal of an exact symmetric LDL^T reduction with pivoting.

    Returns one pivot per eliminated dimension; a trailing zero block shows up
    as zero pivots.  The signs of the pivots give the inertia of the form.
    When every remaining diagonal entry vanishes but an off-diagonal entry
    ``a_ij`` does not, the congruence ``e_i -> e_i + e_j`` produces the
    nonzero diagonal entry ``2 a_ij``.
    """
    a = [[Fraction(v) for v in row] for row in matrix]
    pivots: list[Fraction] = []
    while a:
        n = len(a)
        p = next((i for i in range(n) if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                pivots.extend([Fraction(0)] * n)
                break
            i, j = pair
            for r in range(n):
                a[i][r] += a[j][r]
            for r in range(n):
                a[r][i] += a[r][j]
            p = i
        d = a[p][p]
        pivots.append(d)
        rest = [r for r in range(n) if r != p]
        a = [[a[r][s] - a[r][p] * a[p][s] / d for s in rest] for r in rest]
    return pivots


@dataclass(frozen=True)
class Lattice:
    """An integral symmetric bilinear form on Z^rank."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(as_vector(row) for row in self.gram)
        n = len(rows)
        if n == 0:
            raise LatticeError("gram matrix must be nonempty")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise LatticeError(f"gram matrix is not square (row {i} has length {len(row)}, expected {n})")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise LatticeError(f"gram matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> Lattice:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def check(self, x: Sequence[int]) -> Vector:
        if len(x) != self.rank:
            raise LatticeError(f"class has length {len(x)}, lattice rank is {self.rank}")
        return as_vector(x)

    def apply(self, x: Sequence[int]) -> Vector:
        """gram @ x, i.e. the linear form y -> x.y in coordinates."""
        x = self.check(x)
        return tuple(sum(g * xi for g, xi in zip(row, x)) for row in self.gram)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        y = self.check(y)
        return sum(a * b for a, b in zip(self.apply(x), y))

    def square(self, x: Sequence[int]) -> int:
        return self.pair(x, x)

    @cached_property
    def pivots(self) -> list[Fraction]:
        return ldl_pivots(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        pos = sum(1 for d in self.pivots if d > 0)
        neg = sum(1 for d in self.pivots if d < 0)
        return pos, neg, self.rank - pos - neg

    @cached_property
    def determinant(self) -> int:
        det = Fraction(1)
        for d in self.pivots:
            det *= d
        # congruence moves used in the reduction have determinant 1
        return int(det)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_hyperbolic(self) -> bool:
        return self.signature == (1, self.rank - 1, 0)

    def transform(self, u: Sequence[Sequence[int]]) -> Lattice:
        """The form in the basis given by the columns of ``u`` (gram' = u^T gram u)."""
        n = self.rank
        cols = [tuple(u[r][c] for r in range(n)) for c in range(n)]
        return Lattice(tuple(tuple(self.pair(ci, cj) for cj in cols) for ci in cols))


def pair(lat: Lattice, x: Sequence[int], y: Sequence[int]) -> int:
    return lat.pair(x, y)


def signature(lat: Lattice) -> tuple[int, int, int]:
    return lat.signature


# ---------------------------------------------------------------------------
# Enriques lattice U + E8(-1)

# Bourbaki labelling: simple roots a1..a8 with the chain 1-3-4-5-6-7-8 and
# a2 attached to a4.
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]

ENRIQUES_BASIS_LABELS = ("e", "f") + tuple(f"a{i}" for i in range(1, 9))


def _enriques_gram() -> tuple[tuple[int, ...], ...]:
    g = [[0] * 10 for _ in range(10)]
    g[0][1] = g[1][0] = 1
    for i in range(8):
        g[2 + i][2 + i] = -2
    for i, j in _E8_EDGES:
        g[2 + i][2 + j] = g[2 + j][2 + i] = 1
    return tuple(tuple(r) for r in g)


ENRIQUES_LATTICE = Lattice(_enriques_gram())


# ---------------------------------------------------------------------------
# Polarized surfaces


@dataclass(frozen=True)
class PolarizedSurface:
    """A validated lattice together with an interior reference class ``h``.

    Build instances with :func:`validate_surface`; the constructor does not
    check the surface invariants.
    """

    lattice: Lattice
    kind: SurfaceKind
    h: Vector
    nodal_classes: tuple[Vector, ...] = field(default=())

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return self.lattice.pair(x, y)

    def square(self, x: Sequence[int]) -> int:
        return self.lattice.square(x)

    def degree(self, x: Sequence[int]) -> int:
        """Intersection with the reference class h."""
        return self.lattice.pair(x, self.h)


def validate_surface(
    lattice: Lattice | None,
    kind: SurfaceKind | str,
    h: Sequence[int],
    nodal: Iterable[Sequence[int]] = (),
) -> PolarizedSurface:
    """Check the surface invariants and return a :class:`PolarizedSurface`.

    For Enriques surfaces ``lattice`` may be None, meaning the built-in
    U + E8(-1).  Raises :class:`InvalidSurface` listing every failed check.
    """
    from .enumeration import classes_with_degree_and_square

    kind = SurfaceKind(kind)
    if kind is SurfaceKind.ENRIQUES and lattice is None:
        lattice = ENRIQUES_LATTICE
    if lattice is None:
        raise LatticeError("a gram matrix is required for K3 surfaces")
    h = lattice.check(h)
    nodal = tuple(lattice.check(g) for g in nodal)
    violations: list[tuple[str, str]] = []

    if kind is SurfaceKind.ENRIQUES and lattice != ENRIQUES_LATTICE:
        violations.append(("WrongEnriquesLattice", "gram differs from the built-in U + E8(-1) matrix"))
    if not lattice.is_even:
        odd = [i for i in range(lattice.rank) if lattice.gram[i][i] % 2]
        violations.append(("OddLattice", f"odd diagonal entries at basis indices {odd}"))
    pos, neg, zero = lattice.signature
    if zero:
        violations.append(("DegenerateForm", f"form has a {zero}-dimensional radical"))
    elif (pos, neg) != (1, lattice.rank - 1):
        violations.append(("WrongSignature", f"signature is ({pos}, {neg}), expected (1, {lattice.rank - 1})"))

    h_sq = lattice.square(h)
    if h_sq <= 0:
        violations.append(("HNotPositive", f"h^2 = {h_sq} is not positive"))

    if kind is SurfaceKind.K3:
        if nodal:
            violations.append(("BadNodalClass", "nodal classes are only accepted for Enriques surfaces"))
        if not violations:
            walls = classes_with_degree_and_square(lattice, h, 0, -2)
            if walls:
                violations.append(("HOnWall", f"(-2)-class {list(walls[0])} is orthogonal to h"))
    else:
        for g in nodal:
            g_sq = lattice.square(g)
            g_h = lattice.pair(g, h)
            if g_sq != -2 or g_h <= 0:
                violations.append(("BadNodalClass", f"nodal class {list(g)} has square {g_sq} and h-degree {g_h}"))

    if violations:
        raise InvalidSurface(violations)
    return PolarizedSurface(lattice, kind, h, tuple(sorted(set(nodal))))


def chi(surface: PolarizedSurface, d: Sequence[int]) -> int:
    """Euler characteristic of O(D) by Riemann-Roch (K numerically trivial)."""
    d_sq = surface.square(d)
    if d_sq % 2:
        raise ValueError(f"class has odd self-intersection {d_sq}")
    base = 2 if surface.kind is SurfaceKind.K3 else 1
    return d_sq // 2 + base


def _nodal_combination(target: Vector, nodal: tuple[Vector, ...], surface: PolarizedSurface) -> bool:
    """Is ``target`` a nonnegative integer combination of the nodal classes?

    Every nodal class has positive h-degree, which bounds the search depth.
    """
    degrees = [surface.degree(g) for g in nodal]

    def go(rest: Vector, start: int, budget: int) -> bool:
        if not any(rest):
            return True
        if budget <= 0:
            return False
        for i in range(start, len(nodal)):
            if degrees[i] <= budget:
                nxt = tuple(a - b for a, b in zip(rest, nodal[i]))
                if go(nxt, i, budget - degrees[i]):
                    return True
        return False

    return go(target, 0, surface.degree(target))


def is_effective(surface: PolarizedSurface, d: Sequence[int]) -> Effectivity:
    """Decide effectivity of a numerical class where Riemann-Roch allows it.

    A class of nonpositive h-degree is never effective (h is ample).  Above
    the Riemann-Roch threshold (square >= -2 on K3, >= 0 on Enriques) the sign
    of the h-degree decides.  Below it only sums of declared nodal curves are
    recognised on Enriques surfaces; everything else is Indeterminate.
    """
    d = surface.lattice.check(d)
    if not any(d):
        return Effectivity.EFFECTIVE
    deg = surface.degree(d)
    if deg <= 0:
        return Effectivity.NOT_EFFECTIVE
    d_sq = surface.square(d)
    threshold = -2 if surface.kind is SurfaceKind.K3 else 0
    if d_sq >= threshold:
        return Effectivity.EFFECTIVE
    if surface.kind is SurfaceKind.ENRIQUES and surface.nodal_classes:
        if _nodal_combination(d, surface.nodal_classes, surface):
            return Effectivity.EFFECTIVE
    return Effectivity.INDETERMINATE
