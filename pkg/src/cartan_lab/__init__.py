"""Cartan projections of SL_n over local fields and ball-scale properness tests."""
from ._backend import BACKEND
from .cartan import (
    ChamberGeometry,
    PairMu,
    WeylVector,
    cartan_projection,
    chamber_norm,
    check_mu_subadditivity,
    mu_archimedean,
    mu_nonarch_minors,
    mu_nonarch_snf,
    mu_scalar,
    opposition_involution,
)
from .groups import Ball, EnumConfig, element_order, generate_ball
from .matrices import GeneratorSet, GroupWord, Pair, SLMatrix, evaluate_word, inverse, load_group_spec, multiply, pair_group
from .scalars import FLOAT, RATIONAL, FieldDescriptor, LaurentDomain, LaurentPoly, parse_scalar, valuation
from .spectral import SpectralCensus, eigenvalue_modulus_census, lyapunov_newton_polygon, lyapunov_power_limit

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Ball", "ChamberGeometry", "EnumConfig", "FLOAT", "FieldDescriptor", "GeneratorSet",
    "GroupWord", "LaurentDomain", "LaurentPoly", "Pair", "PairMu", "RATIONAL", "SLMatrix",
    "SpectralCensus", "WeylVector", "cartan_projection", "chamber_norm", "check_mu_subadditivity",
    "eigenvalue_modulus_census", "element_order", "evaluate_word", "generate_ball", "inverse",
    "load_group_spec", "lyapunov_newton_polygon", "lyapunov_power_limit", "multiply", "mu_archimedean",
    "mu_nonarch_minors", "mu_nonarch_snf", "mu_scalar", "opposition_involution", "pair_group",
    "parse_scalar", "valuation",
]
