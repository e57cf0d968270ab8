"""Convergence acceleration for series and products whose terms expand in
fractional powers of n, with built-in numerical-stability monitoring."""

from .classify import (
    RatioExpansion,
    StructuralParameters,
    Verdict,
    convergence_verdict,
    epsilons_from_ratio,
    structure_from_ratio,
)
from .numerics import (
    DOUBLE,
    PRESETS,
    QUAD,
    Precision,
    RangeOverflowError,
    ln_factorial_frac,
    make_context,
    roundoff_unit,
)
from .sampling import Schedule, make_aps, make_explicit, make_gps, parse_schedule, schedule_prefix
from .series_model import (
    ProductProblem,
    SeriesProblem,
    TelescopingFamily,
    builtin_ids,
    builtin_problem,
    load_problem,
    partial_sums,
    product_to_series,
    telescoping_terms,
    trig_series_pair,
)
from .transform import (
    AccelerationResult,
    accelerate,
    accelerate_product,
    estimate_errors,
    sum_trig,
)
from .w_algorithm import (
    DenseSolve,
    ExtrapolationTable,
    SingularSystemError,
    ZeroTermError,
    build_table,
    dense_oracle,
    gamma_from_weights,
    lambda_from_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AccelerationResult",
    "DenseSolve",
    "DOUBLE",
    "ExtrapolationTable",
    "PRESETS",
    "Precision",
    "ProductProblem",
    "QUAD",
    "RangeOverflowError",
    "RatioExpansion",
    "Schedule",
    "SeriesProblem",
    "SingularSystemError",
    "StructuralParameters",
    "TelescopingFamily",
    "Verdict",
    "ZeroTermError",
    "accelerate",
    "accelerate_product",
    "build_table",
    "builtin_ids",
    "builtin_problem",
    "convergence_verdict",
    "dense_oracle",
    "epsilons_from_ratio",
    "estimate_errors",
    "gamma_from_weights",
    "lambda_from_weights",
    "ln_factorial_frac",
    "load_problem",
    "make_aps",
    "make_context",
    "make_explicit",
    "make_gps",
    "parse_schedule",
    "partial_sums",
    "product_to_series",
    "roundoff_unit",
    "schedule_prefix",
    "structure_from_ratio",
    "sum_trig",
    "telescoping_terms",
    "trig_series_pair",
]
