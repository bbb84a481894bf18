"""Two-sided s-number estimates for weighted Hardy operators on L^p and L^{p(.)}."""

__version__ = "0.1.0"

from .bfs_core import (
    ConstantExponent,
    VariableExponent,
    WeightPair,
    associate_norm,
    conjugate,
    holder_defect,
    integrate,
    log_holder_check,
    luxemburg_norm,
    muckenhoupt_constant,
)
from .errors import DomainError, HardyError, InputError, NumericError, ResolutionError
from .grid import GridFunction, Interval, parse_function
from .hardy_op import (
    NormBracket,
    OperatorSpec,
    a_profile,
    a_sup,
    apply,
    compactness_profile,
    holder_bound,
    norm_bracket,
    operator_norm_lower,
)
from .oracle import discretize, script_a_l2, svd_snumbers
from .partition import (
    PartitionResult,
    SNumberEstimate,
    asymptote,
    count_intervals,
    gamma_p,
    reference_constant,
    snum_estimate,
    solve_epsilon,
)
from .script_a import (
    a_hat,
    equalize,
    norm_map,
    perturb_u_bound,
    perturb_v_bound,
    script_a_bracket,
    script_a_lower,
    step_approximate,
)
