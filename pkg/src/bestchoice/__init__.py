"""Threshold stopping rules for the k-class alternative best-choice problem."""

from bestchoice.analytics import (
    DomainError,
    ExactProbability,
    density_f,
    exact_success_prob,
    lower_bound_h,
    no_record_bound,
    no_record_prob_exact,
    optimal_threshold,
)
from bestchoice.model import (
    Arrival,
    ClassCounts,
    ModelViolationError,
    Realization,
    Seed,
    class_maxima_times,
    sample_realization,
)
from bestchoice.montecarlo import SimulationConfig, SimulationStats, simulate, sweep
from bestchoice.optimize import SearchConfig, optimize_threshold
from bestchoice.strategy import (
    Outcome,
    OutcomeKind,
    ThresholdStrategy,
    build_two_stream,
    run_best_or_worst,
    run_threshold_strategy,
)

__all__ = [
    "Arrival",
    "ClassCounts",
    "DomainError",
    "ExactProbability",
    "ModelViolationError",
    "Outcome",
    "OutcomeKind",
    "Realization",
    "SearchConfig",
    "Seed",
    "SimulationConfig",
    "SimulationStats",
    "ThresholdStrategy",
    "build_two_stream",
    "class_maxima_times",
    "density_f",
    "exact_success_prob",
    "lower_bound_h",
    "no_record_bound",
    "no_record_prob_exact",
    "optimal_threshold",
    "optimize_threshold",
    "run_best_or_worst",
    "run_threshold_strategy",
    "sample_realization",
    "simulate",
    "sweep",
]
