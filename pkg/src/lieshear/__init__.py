"""Exact exterior calculus on Lie algebra duals, twist/shear constructions,
structure transfer, and geometric structure checks — all over the rationals."""

from .exterior import (
    KForm,
    Vector,
    hodge_star_orthonormal,
    interior,
    pullback,
    wedge,
    wedge_all,
)
from .geometry import (
    ComplexStructure,
    HalfFlatReport,
    KahlerReport,
    Metric,
    NijenhuisResult,
    PhiStabilityReport,
    StructureSpec,
    g2_cocal_check,
    half_flat_check,
    is_closed,
    kahler_check,
    nijenhuis,
    phi_stability,
    preserves_closure,
    symplectic_check,
    type_components,
)
from .lie import (
    EigenSpace,
    Filtration,
    JacobiReport,
    LieAlgebra,
    SalamonError,
    SeriesReport,
    ShearLineReport,
    parse_salamon,
    print_salamon,
)
from .search import SearchHit, SearchSpaceError, SearchSpec, enumerate_f0
from .shear import (
    DecompResult,
    InvalidShearError,
    ShearData,
    ShearDataError,
    ShearReport,
    TwistError,
    apply_shear,
    apply_twist,
    decompose_dalpha,
    ds_form,
    invert_shear,
    is_automorphic,
    shear_candidate,
    validate_shear,
)

__all__ = [
    "KForm",
    "Vector",
    "wedge",
    "wedge_all",
    "interior",
    "hodge_star_orthonormal",
    "pullback",
    "LieAlgebra",
    "parse_salamon",
    "print_salamon",
    "SalamonError",
    "JacobiReport",
    "SeriesReport",
    "Filtration",
    "EigenSpace",
    "ShearLineReport",
    "ShearData",
    "ShearDataError",
    "ShearReport",
    "DecompResult",
    "InvalidShearError",
    "TwistError",
    "decompose_dalpha",
    "validate_shear",
    "apply_shear",
    "shear_candidate",
    "apply_twist",
    "ds_form",
    "is_automorphic",
    "invert_shear",
    "Metric",
    "ComplexStructure",
    "StructureSpec",
    "NijenhuisResult",
    "KahlerReport",
    "HalfFlatReport",
    "PhiStabilityReport",
    "is_closed",
    "symplectic_check",
    "nijenhuis",
    "type_components",
    "kahler_check",
    "half_flat_check",
    "g2_cocal_check",
    "phi_stability",
    "preserves_closure",
    "SearchSpec",
    "SearchHit",
    "SearchSpaceError",
    "enumerate_f0",
]

__version__ = "0.1.0"
