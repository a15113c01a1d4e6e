"""Deciders for line bundles on Enriques surfaces.

Num(S) is the fixed lattice U + E8(-1).  Isotropic classes of positive
h-degree are always effective, so the isotropic part of every criterion is
numerically exact.  Effective (-2)-curves cannot be read off the lattice;
they are whatever the caller declared in ``surface.nodal_classes`` (empty
means an unnodal surface).
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
    Verdict,
    WitnessCertificate,
    WitnessKind,
    WrongSurfaceKind,
)
from .enumeration import classes_with_degree_and_square
from .lattice import PolarizedSurface, SurfaceKind, Vector


class ViolatorType(str, enum.Enum):
    NODAL_I = "NodalI"
    ISOTROPIC_II = "IsotropicII"
    DOUBLE_III = "DoubleIII"
    DOUBLE_IV = "DoubleIV"
    NONE = "None"


@dataclass(frozen=True)
class EnriquesReport:
    phi: int
    k_max: int
    violator_type: ViolatorType
    witness: Optional[WitnessCertificate]
    # DoubleIII / DoubleIV when L = 2D and the first failing k is 1 or 3
    annotation: Optional[tuple[ViolatorType, Vector]] = None

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "k_max": self.k_max,
            "violator_type": self.violator_type.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "annotation": None
            if self.annotation is None
            else {"type": self.annotation[0].value, "D": list(self.annotation[1])},
        }


def _require_enriques(surface: PolarizedSurface) -> None:
    if surface.kind is not SurfaceKind.ENRIQUES:
        raise WrongSurfaceKind(f"operation needs an Enriques surface, got {surface.kind.value}")


def _min_nodal(surface: PolarizedSurface, L: Vector) -> Optional[Vector]:
    if not surface.nodal_classes:
        return None
    return min(surface.nodal_classes, key=lambda g: (surface.pair(g, L), g))


def is_nef_enriques(surface: PolarizedSurface, L: Sequence[int]) -> Verdict:
    """Nefness against the declared nodal curves.

    Classes of the positive cone meet every curve of nonnegative square
    nonnegatively, so only (-2)-curves can obstruct.  Exact when the nodal
    set is complete.
    """
    _require_enriques(surface)
    L = surface.lattice.check(L)
    L_sq = surface.square(L)
    if L_sq <= 0 or surface.degree(L) <= 0:
        raise NotBigError(f"L^2 = {L_sq}, L.h = {surface.degree(L)}: class is not big in the positive cone")
    g = _min_nodal(surface, L)
    if g is not None and surface.pair(g, L) < 0:
        return Verdict(False, Clause.NOT_NEF, WitnessCertificate.build(surface, L, g, None, WitnessKind.WALL))
    return Verdict(True, Clause.NO_VIOLATOR)


def is_ample_enriques(surface: PolarizedSurface, L: Sequence[int]) -> Verdict:
    nef = is_nef_enriques(surface, L)
    if not nef:
        return nef
    L = tuple(L)
    g = _min_nodal(surface, L)
    if g is not None and surface.pair(g, L) == 0:
        return Verdict(False, Clause.VIOLATOR_FOUND, WitnessCertificate.build(surface, L, g, None, WitnessKind.WALL))
    return Verdict(True, Clause.NO_VIOLATOR)


def _require_nef(surface: PolarizedSurface, L: Sequence[int]) -> Vector:
    verdict = is_nef_enriques(surface, L)
    if not verdict:
        raise NotNefError("class is not nef against the declared nodal curves", verdict)
    return tuple(L)


def _phi_and_fibre(surface: PolarizedSurface, L: Vector) -> tuple[int, Vector]:
    bound = isqrt(surface.square(L))
    for c in range(1, bound + 1):
        fibres = classes_with_degree_and_square(surface, L, c, 0, positive=True)
        if fibres:
            return c, fibres[0]
    raise ArithmeticError(f"no isotropic class of L-degree <= {bound}; the lattice is not U + E8(-1)")


def phi(surface: PolarizedSurface, L: Sequence[int]) -> int:
    """Minimal L-degree of a nonzero effective isotropic class.

    Always at most floor(sqrt(L^2)), so the scan is finite.
    """
    _require_enriques(surface)
    L = _require_nef(surface, L)
    return _phi_and_fibre(surface, L)[0]


def is_k_very_ample_enriques(surface: PolarizedSurface, L: Sequence[int], k: int) -> Verdict:
    """k-very ampleness: no nodal G with G.L <= k-1 and no isotropic f with f.L <= k+1.

    The nodal clause is only as complete as the declared nodal set.
    """
    _require_enriques(surface)
    if k < 0:
        raise ValueError("k must be nonnegative")
    L = _require_nef(surface, L)
    g = _min_nodal(surface, L)
    if g is not None and surface.pair(g, L) <= k - 1:
        return Verdict(False, Clause.VIOLATOR_FOUND, WitnessCertificate.build(surface, L, g, k, WitnessKind.NEG_TWO_CURVE))
    value, fibre = _phi_and_fibre(surface, L)
    if value <= k + 1:
        return Verdict(False, Clause.VIOLATOR_FOUND, WitnessCertificate.build(surface, L, fibre, k, WitnessKind.NON_NEG_SQUARE))
    return Verdict(True, Clause.NO_VIOLATOR)


is_k_spanned_enriques = is_k_very_ample_enriques


def max_k_enriques(surface: PolarizedSurface, L: Sequence[int]) -> EnriquesReport:
    """Largest k for which L is k-very ample, and what breaks at k + 1."""
    _require_enriques(surface)
    L = _require_nef(surface, L)
    value, fibre = _phi_and_fibre(surface, L)
    g = _min_nodal(surface, L)
    nodal_bound = None if g is None else surface.pair(g, L)
    k_max = value - 2 if nodal_bound is None else min(nodal_bound, value - 2)
    k = k_max + 1
    if nodal_bound is not None and nodal_bound == k_max:
        vtype = ViolatorType.NODAL_I
        witness = WitnessCertificate.build(surface, L, g, k, WitnessKind.NEG_TWO_CURVE)
    else:
        vtype = ViolatorType.ISOTROPIC_II
        witness = WitnessCertificate.build(surface, L, fibre, k, WitnessKind.NON_NEG_SQUARE)

    annotation = None
    if all(a % 2 == 0 for a in L):
        D = tuple(a // 2 for a in L)
        d_sq = surface.square(D)
        if d_sq == 2 and k == 1:
            annotation = (ViolatorType.DOUBLE_III, D)
        elif d_sq == 4 and k == 3:
            annotation = (ViolatorType.DOUBLE_IV, D)
    return EnriquesReport(value, k_max, vtype, witness, annotation)
