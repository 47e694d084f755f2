"""Co-simulation lab for stealthy sensor attacks on a planar manipulator.

Thin re-export of the compiled core; see the project README for the model
and the command line front end.
"""

from fdialab._core import (
    AttackDiag,
    EpisodeResult,
    EpisodeTrace,
    MetricReport,
    Mode,
    QcqpSolution,
    QuinticPlan,
    ScenarioConfig,
    calibrate_threshold,
    chi2_quantile,
    compute_metrics,
    design_zx,
    jury_stable,
    load_config,
    lqr_gains,
    quintic_plan,
    read_trace_csv,
    reg_lower_gamma,
    run_episode,
    solve_dare,
    solve_qcqp,
    validate,
    write_trace_csv,
)

__all__ = [
    "AttackDiag",
    "EpisodeResult",
    "EpisodeTrace",
    "MetricReport",
    "Mode",
    "QcqpSolution",
    "QuinticPlan",
    "ScenarioConfig",
    "calibrate_threshold",
    "chi2_quantile",
    "compute_metrics",
    "design_zx",
    "jury_stable",
    "load_config",
    "lqr_gains",
    "quintic_plan",
    "read_trace_csv",
    "reg_lower_gamma",
    "run_episode",
    "solve_dare",
    "solve_qcqp",
    "validate",
    "write_trace_csv",
]
