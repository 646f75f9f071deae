"""Discrete-series Whittaker functions on Spin(2n,2).

Chamber classification of Harish-Chandra parameters, Whittaker-model
dimension formulas, exact Gelfand-Tsetlin combinatorics, the radial scalar
ODE systems, and Mellin-Barnes/Bessel evaluation with shift operators.
"""

from .halfint import HalfInt, half
from .gt import (
    GTPattern,
    PatternBasis,
    a_coeff,
    apply_generator,
    apply_shift,
    casimir_scalar,
    count_patterns,
    enumerate_patterns,
    l_coord,
    projection_coeff,
    tau,
    validate_pattern,
)
from .params import (
    BlattnerWeight,
    Chamber,
    Character,
    HCParam,
    blattner,
    classify,
    contragredient,
    gk_dimension,
    has_algebraic_whittaker,
)
from .dims import (
    DimResult,
    InterlacingTuple,
    algebraic_whittaker_dim,
    continuous_whittaker_dim,
    interlacings,
    weyl_dim,
)

__all__ = [
    "HalfInt",
    "half",
    "GTPattern",
    "PatternBasis",
    "a_coeff",
    "apply_generator",
    "apply_shift",
    "casimir_scalar",
    "count_patterns",
    "enumerate_patterns",
    "l_coord",
    "projection_coeff",
    "tau",
    "validate_pattern",
    "BlattnerWeight",
    "Chamber",
    "Character",
    "HCParam",
    "blattner",
    "classify",
    "contragredient",
    "gk_dimension",
    "has_algebraic_whittaker",
    "DimResult",
    "InterlacingTuple",
    "algebraic_whittaker_dim",
    "continuous_whittaker_dim",
    "interlacings",
    "weyl_dim",
]

__version__ = "0.1.0"
