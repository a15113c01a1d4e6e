"""Decide k-very ampleness, k-spannedness and birational k-very ampleness of
line bundles on K3 and Enriques surfaces from their Picard lattice, and
compute the Clifford index and minimal gonality of curves in |L|."""
from .certificates import (
    Clause,
    NotBigError,
    NotNefError,
    NotSpannedError,
    PreconditionError,
    Verdict,
    WitnessCertificate,
    WitnessKind,
    WrongSurfaceKind,
)
from .enriques import (
    EnriquesReport,
    ViolatorType,
    is_ample_enriques,
    is_k_spanned_enriques,
    is_k_very_ample_enriques,
    is_nef_enriques,
    max_k_enriques,
    phi,
)
from .enumeration import NonDefiniteForm, classes_with_degree_and_square, definite_enumerate
from .k3 import (
    CliffordReport,
    Mode,
    clifford_index,
    detect_exceptional,
    find_violator,
    is_ample,
    is_birationally_k_spanned,
    is_birationally_k_very_ample,
    is_k_spanned,
    is_k_very_ample,
    is_nef,
    is_spanned,
    min_gonality,
)
from .lattice import (
    ENRIQUES_BASIS_LABELS,
    ENRIQUES_LATTICE,
    Effectivity,
    InvalidSurface,
    Lattice,
    LatticeError,
    PolarizedSurface,
    SurfaceKind,
    chi,
    is_effective,
    pair,
    signature,
    validate_surface,
)

__version__ = "0.1.0"
