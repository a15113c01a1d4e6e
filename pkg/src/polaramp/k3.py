"""Positivity deciders for line bundles on K3 surfaces.

Every decider works on the numerical class of L in a validated
:class:`~polaramp.lattice.PolarizedSurface`.  Effective classes are found by
Riemann-Roch: a class of square >= -2 is effective exactly when it has
positive degree against the reference class h.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt
from typing import Optional, Sequence

from .certificates import (
    Clause,
    NotBigError,
    NotNefError,
    NotSpannedError,
    Verdict,
    WitnessCertificate,
    WitnessKind,
    WrongSurfaceKind,
)
from .enumeration import classes_with_degree_and_square
from .lattice import PolarizedSurface, SurfaceKind, Vector


class Mode(str, enum.Enum):
    """Which violator conditions to search.

    STAR is the condition governing k-very ampleness; STAR_STAR drops the
    (-2)-classes and the divisors with (L^2, D^2) = (4k+2, k), and governs
    birational k-very ampleness.
    """

    STAR = "Star"
    STAR_STAR = "StarStar"


@dataclass(frozen=True)
class CliffordReport:
    c: int
    k1: Optional[int]  # None stands for infinity
    k2: int
    exceptional: bool
    decomposition: Optional[tuple[Vector, Vector]] = None

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "k1": self.k1,
            "k2": self.k2,
            "exceptional": self.exceptional,
            "decomposition": None
            if self.decomposition is None
            else {"D": list(self.decomposition[0]), "Gamma": list(self.decomposition[1])},
        }


def _require_k3(surface: PolarizedSurface) -> None:
    if surface.kind is not SurfaceKind.K3:
        raise WrongSurfaceKind(f"operation needs a K3 surface, got {surface.kind.value}")


def _require_big(surface: PolarizedSurface, L: Sequence[int]) -> Vector:
    L = surface.lattice.check(L)
    L_sq = surface.square(L)
    if L_sq <= 0 or surface.degree(L) <= 0:
        raise NotBigError(f"L^2 = {L_sq}, L.h = {surface.degree(L)}: class is not big in the positive cone")
    return L


def _require_nef(surface: PolarizedSurface, L: Sequence[int]) -> Vector:
    verdict = is_nef(surface, L)
    if not verdict:
        raise NotNefError("class is not nef", verdict)
    return tuple(L)


def _require_spanned(surface: PolarizedSurface, L: Sequence[int]) -> Vector:
    verdict = is_spanned(surface, L)
    if not verdict:
        raise NotSpannedError("class is not base point free", verdict)
    return tuple(L)


def is_nef(surface: PolarizedSurface, L: Sequence[int]) -> Verdict:
    """L is nef iff no effective (-2)-class meets it negatively.

    Such a wall G with a = G.h > 0 and b = -G.L > 0 spans with h and L a
    sublattice with at most one positive direction, which forces
    h^2 b^2 + 2 ab (h.L) + a^2 L^2 <= 2 ((h.L)^2 - h^2 L^2).  The b-term
    alone bounds the finite search.
    """
    _require_k3(surface)
    L = _require_big(surface, L)
    h = surface.h
    h_sq, L_sq, hL = surface.square(h), surface.square(L), surface.pair(h, L)
    gap = hL * hL - h_sq * L_sq
    if gap == 0:
        return Verdict(True, Clause.NO_VIOLATOR)
    b_max = isqrt(2 * gap // h_sq)
    for b in range(1, b_max + 1):
        walls = classes_with_degree_and_square(surface, L, -b, -2, positive=True)
        if walls:
            return Verdict(False, Clause.NOT_NEF, WitnessCertificate.build(surface, L, walls[0], None, WitnessKind.WALL))
    return Verdict(True, Clause.NO_VIOLATOR)


def is_ample(surface: PolarizedSurface, L: Sequence[int]) -> Verdict:
    nef = is_nef(surface, L)
    if not nef:
        return nef
    L = tuple(L)
    contracted = classes_with_degree_and_square(surface, L, 0, -2, positive=True)
    if contracted:
        return Verdict(False, Clause.VIOLATOR_FOUND, WitnessCertificate.build(surface, L, contracted[0], None, WitnessKind.WALL))
    return Verdict(True, Clause.NO_VIOLATOR)


def is_spanned(surface: PolarizedSurface, L: Sequence[int]) -> Verdict:
    """Base point freeness: fails iff some elliptic class E has E.L = 1."""
    L = _require_nef(surface, L)
    fibres = classes_with_degree_and_square(surface, L, 1, 0, positive=True)
    if fibres:
        return Verdict(False, Clause.NOT_SPANNED, WitnessCertificate.build(surface, L, fibres[0], 0, WitnessKind.NON_NEG_SQUARE))
    return Verdict(True, Clause.NO_VIOLATOR)


def _is_double(L: Vector, D: Vector) -> bool:
    return all(a == 2 * b for a, b in zip(L, D))


def _nonneg_square_violators(surface: PolarizedSurface, L: Vector, k: int, mode: Mode):
    """Yield classes D with D^2 >= 0 satisfying the (*) chain, in (m, c, lex) order.

        2 D^2 <= D.L <= D^2 + k + 1 <= 2k + 2

    The two equality cases are only admitted when L = 2D and L^2 <= 4k+4
    (first inequality) or L^2 = 4k+4 (last inequality).
    """
    L_sq = surface.square(L)
    for m in range(0, k + 2, 2):  # even lattice: odd squares never occur
        if mode is Mode.STAR_STAR and L_sq == 4 * k + 2 and m == k:
            continue
        for c in range(max(2 * m, 1), min(m + k + 1, 2 * k + 2) + 1):
            for D in classes_with_degree_and_square(surface, L, c, m, positive=True):
                if c == 2 * m and not (_is_double(L, D) and L_sq <= 4 * k + 4):
                    continue
                if m == k + 1 and not (_is_double(L, D) and L_sq == 4 * k + 4):
                    continue
                yield D


def find_violator(surface: PolarizedSurface, L: Sequence[int], k: int, mode: Mode | str = Mode.STAR) -> Optional[WitnessCertificate]:
    """Smallest effective class violating the (*) or (**) conditions, if any.

    Classes of nonnegative square are searched first, then smooth rational
    curves G with G.L <= k - 1 (Star mode only).  A divisor of negative square
    satisfying (*) always contains such a curve, so searching (-2)-classes is
    enough.
    """
    _require_k3(surface)
    mode = Mode(mode)
    if k < 0:
        raise ValueError("k must be nonnegative")
    L = surface.lattice.check(L)
    for D in _nonneg_square_violators(surface, L, k, mode):
        return WitnessCertificate.build(surface, L, D, k, WitnessKind.NON_NEG_SQUARE)
    if mode is Mode.STAR:
        for c in range(0, k):
            curves = classes_with_degree_and_square(surface, L, c, -2, positive=True)
            if curves:
                return WitnessCertificate.build(surface, L, curves[0], k, WitnessKind.NEG_TWO_CURVE)
    return None


def is_k_very_ample(surface: PolarizedSurface, L: Sequence[int], k: int) -> Verdict:
    _require_k3(surface)
    if k < 0:
        raise ValueError("k must be nonnegative")
    L = _require_nef(surface, L)
    if surface.square(L) < 4 * k:
        return Verdict(False, Clause.DEGREE_BOUND)
    witness = find_violator(surface, L, k, Mode.STAR)
    if witness is not None:
        return Verdict(False, Clause.VIOLATOR_FOUND, witness)
    return Verdict(True, Clause.NO_VIOLATOR)


# k-very ampleness and k-spannedness coincide on K3 surfaces
is_k_spanned = is_k_very_ample


def is_birationally_k_very_ample(surface: PolarizedSurface, L: Sequence[int], k: int) -> Verdict:
    _require_k3(surface)
    if k < 1:
        raise ValueError("birational k-very ampleness is defined for k >= 1")
    L = _require_spanned(surface, L)
    if surface.square(L) < 4 * k:
        return Verdict(False, Clause.DEGREE_BOUND)
    witness = find_violator(surface, L, k, Mode.STAR_STAR)
    if witness is not None:
        return Verdict(False, Clause.VIOLATOR_FOUND, witness)
    return Verdict(True, Clause.NO_VIOLATOR)


is_birationally_k_spanned = is_birationally_k_very_ample


def detect_exceptional(surface: PolarizedSurface, L: Sequence[int], c: Optional[int] = None) -> tuple[bool, Optional[tuple[Vector, Vector]]]:
    """Is |L| the exceptional system L = 2D + G with D^2 = c+1, G^2 = -2, D.G = 1?

    Also requires that no (**) divisor exists for k = c + 1.  Returns the
    pair (D, G) when it is.
    """
    _require_k3(surface)
    L = _require_spanned(surface, L)
    if c is None:
        c = _clifford_numbers(surface, L)[0]
    k = c + 1
    if find_violator(surface, L, k, Mode.STAR_STAR) is not None:
        return False, None
    for g in classes_with_degree_and_square(surface, L, 0, -2, positive=True):
        rest = tuple(a - b for a, b in zip(L, g))
        if any(a % 2 for a in rest):
            continue
        D = tuple(a // 2 for a in rest)
        if surface.square(D) == k and surface.pair(D, g) == 1 and surface.degree(D) > 0:
            return True, (D, g)
    return False, None


def _clifford_numbers(surface: PolarizedSurface, L: Vector) -> tuple[int, Optional[int], int]:
    k2 = surface.square(L) // 4 + 1
    k1 = None
    for k in range(1, k2 + 1):
        if next(_nonneg_square_violators(surface, L, k, Mode.STAR), None) is not None:
            k1 = k
            break
    c = (k2 if k1 is None else min(k1, k2)) - 1
    return c, k1, k2


def clifford_index(surface: PolarizedSurface, L: Sequence[int]) -> CliffordReport:
    """Clifford index of the smooth curves in |L|, with the exceptional flag."""
    _require_k3(surface)
    L = _require_spanned(surface, L)
    c, k1, k2 = _clifford_numbers(surface, L)
    exceptional, decomposition = detect_exceptional(surface, L, c)
    return CliffordReport(c, k1, k2, exceptional, decomposition)


def min_gonality(surface: PolarizedSurface, L: Sequence[int]) -> int:
    """Minimal gonality of a smooth curve in |L|.

    Equals k + 2 for the largest k >= 1 such that L is birationally k-very
    ample, or 2 when L is not even birationally very ample.
    """
    _require_k3(surface)
    L = _require_spanned(surface, L)
    best = 0
    for k in range(1, surface.square(L) // 4 + 2):
        if not is_birationally_k_very_ample(surface, L, k):
            break
        best = k
    return best + 2
