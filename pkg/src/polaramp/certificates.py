"""Verdicts, witness certificates and the precondition errors of the deciders."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .lattice import PolarizedSurface, Vector


class Clause(str, enum.Enum):
    DEGREE_BOUND = "DegreeBound"
    NO_VIOLATOR = "NoViolator"
    VIOLATOR_FOUND = "ViolatorFound"
    NOT_SPANNED = "NotSpanned"
    NOT_NEF = "NotNef"
    NOT_BIG = "NotBig"


class WitnessKind(str, enum.Enum):
    NEG_TWO_CURVE = "NegTwoCurve"
    NON_NEG_SQUARE = "NonNegSquare"
    EXCEPTIONAL = "Exceptional"
    # a (-2)-class of nonpositive L-degree, certifying failure of nefness/ampleness
    WALL = "Wall"


@dataclass(frozen=True)
class WitnessCertificate:
    D: Vector
    D_sq: int
    DL: int
    k: Optional[int]
    failing_degree: int
    kind: WitnessKind

    @classmethod
    def build(cls, surface: PolarizedSurface, L: Vector, D: Vector, k: Optional[int], kind: WitnessKind):
        d_sq = surface.square(D)
        dl = surface.pair(D, L)
        return cls(D, d_sq, dl, k, dl - d_sq, kind)

    def recheck(self, surface: PolarizedSurface, L: Vector) -> bool:
        """Recompute the stored invariants from the intersection form."""
        d_sq = surface.square(self.D)
        dl = surface.pair(self.D, L)
        return (d_sq, dl, dl - d_sq) == (self.D_sq, self.DL, self.failing_degree)

    def to_dict(self) -> dict:
        return {
            "D": list(self.D),
            "D_sq": self.D_sq,
            "DL": self.DL,
            "k": self.k,
            "failing_degree": self.failing_degree,
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class Verdict:
    answer: bool
    clause: Clause
    witness: Optional[WitnessCertificate] = None

    def __bool__(self) -> bool:
        return self.answer

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "clause": self.clause.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


class PreconditionError(ValueError):
    """A decider was called on a class outside its domain.

    ``clause`` names the failed hypothesis; ``verdict`` holds the failing
    check's result (with its witness) when one was computed.
    """

    clause: Clause = Clause.NOT_BIG

    def __init__(self, message: str, verdict: Optional[Verdict] = None):
        super().__init__(message)
        self.verdict = verdict


class NotBigError(PreconditionError):
    clause = Clause.NOT_BIG


class NotNefError(PreconditionError):
    clause = Clause.NOT_NEF


class NotSpannedError(PreconditionError):
    clause = Clause.NOT_SPANNED


class WrongSurfaceKind(ValueError):
    pass
