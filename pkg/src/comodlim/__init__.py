"""Exact limits and colimits of finite-dimensional left comodules over a coalgebra."""

from .coalg import (
    Coalgebra,
    corpus,
    divided_power_coalgebra,
    grouplike_coalgebra,
    matrix_coalgebra,
    trivial_coalgebra,
    validate_coalgebra,
)
from .colimits import (
    CoconeResult,
    coequalizer,
    coimage_factorization,
    cokernel,
    colimit_mediating,
    coproduct,
    finite_colimit,
    pushout,
)
from .comod import (
    ComodMorphism,
    Comodule,
    Subcomodule,
    cofree,
    cofree_factorize,
    direct_sum,
    generated_subcomodule,
    quotient_comodule,
    random_comodule,
    restrict_coaction,
    validate_comodule,
    validate_morphism,
)
from .diagram import Arrow, Diagram, MediatingResult
from .errors import (
    CertificateFailure,
    ComodError,
    ConeMismatch,
    FatalCorrectnessError,
    InvalidStructure,
    NoSolution,
    NotCoinvariant,
    ShapeError,
)
from .exactlin import RationalMatrix, Subspace
from .limits import (
    ConeResult,
    comodule_limit,
    equalizer,
    mediating_morphism,
    product,
    pullback,
    rational_realization,
)

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "Diagram",
    "MediatingResult",
    "RationalMatrix",
    "Subspace",
    "CertificateFailure",
    "Coalgebra",
    "CoconeResult",
    "ComodError",
    "ComodMorphism",
    "Comodule",
    "ConeMismatch",
    "ConeResult",
    "FatalCorrectnessError",
    "InvalidStructure",
    "NoSolution",
    "NotCoinvariant",
    "ShapeError",
    "Subcomodule",
    "coequalizer",
    "cofree",
    "cofree_factorize",
    "coimage_factorization",
    "cokernel",
    "colimit_mediating",
    "comodule_limit",
    "coproduct",
    "corpus",
    "direct_sum",
    "divided_power_coalgebra",
    "equalizer",
    "finite_colimit",
    "generated_subcomodule",
    "grouplike_coalgebra",
    "matrix_coalgebra",
    "mediating_morphism",
    "product",
    "pullback",
    "pushout",
    "quotient_comodule",
    "random_comodule",
    "rational_realization",
    "restrict_coaction",
    "trivial_coalgebra",
    "validate_coalgebra",
    "validate_comodule",
    "validate_morphism",
]
