"""Polynomial-time upper bounds on #SAT from the moments of the
frustrated-clause count, with an exact enumeration oracle."""

from .bounds import (
    SAT_POSSIBLE,
    UNSAT_CERTIFIED,
    BoundEntry,
    BoundReport,
    CutoffParams,
    RegimeError,
    asymptotic_bounds,
    basic_bound,
    bound_report,
    cantelli_tail,
    cantelli_vk,
    cs_bound_given_v1,
    cutoff_scan,
    cutoff_value,
    medium_cutoff_bound,
    optimized_cutoff_m1,
    sat_verdict,
    sharpened_bound,
)
from .cnf import (
    Clause,
    CnfFormula,
    DimacsError,
    Literal,
    assignment_from_bits,
    emit_dimacs,
    flip_variable,
    parse_dimacs,
    read_formula,
)
from .frustration import (
    FrustrationPolynomial,
    Moments,
    UnsupportedWidthError,
    eval_u_direct,
    eval_u_poly,
    moments,
    poly_coefficients,
)
from .generate import GenSpec, generate
from .oracle import (
    OracleCapExceeded,
    UDistribution,
    delta_leq,
    enumerate_distribution,
    model_count,
    tail_prob,
)
from .slimsat import SlimStats, normalize, slim_stats

__version__ = "0.1.0"
