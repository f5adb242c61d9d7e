"""Exact law and Monte Carlo verification of a branching random walk's
additive-martingale limit.

The limit W of the martingale sum of e^{-t-x} over a Poisson branching random
walk on the quadrant has an explicit law: its moment-generating function is
an inverse of the integral transform F, its explosion point is the constant
r*, its Laplace transform solves a first-order ODE, and its moments satisfy a
two-term recursion.  This package evaluates all of those objects numerically
and checks every one of them against an independent Monte Carlo simulation of
the particle system.
"""

from .errors import (
    BiasBudgetExceeded,
    BracketFailure,
    DomainError,
    NotEnoughData,
    OdeFailure,
    OrderTooLarge,
    RadiusExceeded,
    ResourceBudgetExceeded,
    ToleranceFailure,
    VarianceUnbounded,
)
from .law import (
    MgfValue,
    cgf,
    explosion_asymptote_check,
    laplace,
    laplace_grid,
    left_tail_asymptote,
    mgf,
    ode_residual,
    right_tail_rate,
)
from .moments import (
    MomentTable,
    SeriesEval,
    build_moment_table,
    cgf_series,
    mgf_series,
    moment_table_to_csv,
    w1_log_mgf,
)
from .numerics import (
    LawTables,
    QuadratureSpec,
    build_tables,
    compute_r_star,
    eval_F,
    eval_G,
    eval_H,
    find_root_bracketed,
    integrate_adaptive,
    invert_F,
)
from .simulate import (
    Atom,
    BatchKind,
    ModelParams,
    SampleBatch,
    batch_from_json,
    batch_to_csv,
    batch_to_json,
    sample_offspring,
    selfdecomp_batches,
    simulate_selfdecomp_pair,
    simulate_Vt,
    simulate_W,
    simulate_W1,
    simulate_yule_W,
    tilted_batch,
    vt_batch,
    w1_batch,
    w_batch,
    yule_batch,
)
from .stats import (
    DensityTailReport,
    EstimateWithSE,
    TailFit,
    density_tail_check,
    empirical_mgf,
    gaussian_kde_grid,
    kde_mode_count,
    ks_one_sample_exp,
    ks_two_sample,
    silverman_bandwidth,
    tail_slope,
)
from .verify import GOLDEN_R_STAR, CheckResult, run_verification

__version__ = "0.1.0"
