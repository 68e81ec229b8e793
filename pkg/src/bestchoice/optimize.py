"""Threshold search: coarse grid, then golden-section refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from bestchoice.analytics import DomainError, exact_success_prob, lower_bound_h
from bestchoice.model import ClassCounts

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
OBJECTIVES = ("analytic-bound", "exact", "monte-carlo")


@dataclass(frozen=True)
class SearchConfig:
    grid_points: int = 21
    tol: float = 1e-10
    max_iter: int = 200
    dense_points: int = 2001
    trials: int = 100_000
    master_seed: int = 0
    panels: int = 256


@dataclass(frozen=True)
class OptimizationResult:
    t_star: float
    value: float
    method: str
    evaluations: int
    flagged: bool = False


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float, max_iter: int):
    """Maximise a unimodal ``f`` on ``[a, b]``. Returns ``(x, f(x), evaluations)``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


def _is_unimodal(values: np.ndarray) -> bool:
    steps = np.sign(np.diff(values))
    steps = steps[steps != 0]
    # once it starts falling it must not rise again
    falling = np.flatnonzero(steps < 0)
    return falling.size == 0 or bool(np.all(steps[falling[0] :] < 0))


def maximize_on_unit_interval(f: Callable[[float], float], cfg: SearchConfig, method: str) -> OptimizationResult:
    grid = np.linspace(0.0, 1.0, cfg.grid_points)
    values = np.array([f(float(t)) for t in grid])
    evals = len(grid)
    flagged = not _is_unimodal(values)
    if flagged:
        grid = np.linspace(0.0, 1.0, cfg.dense_points)
        values = np.array([f(float(t)) for t in grid])
        evals += len(grid)
    i = int(values.argmax())
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    x, fx, n = golden_section_max(f, float(lo), float(hi), cfg.tol, cfg.max_iter)
    evals += n
    # the maximiser may sit on the edge of [0, 1]
    for edge in (0.0, 1.0):
        if edge in (lo, hi):
            fe = f(edge)
            evals += 1
            if fe >= fx:
                x, fx = edge, fe
    if values[i] > fx:
        x, fx = float(grid[i]), float(values[i])
    return OptimizationResult(float(x), float(fx), method, evals, flagged)


def optimize_threshold(
    k: Optional[int] = None,
    counts: Optional[ClassCounts] = None,
    objective: str = "analytic-bound",
    search: SearchConfig = SearchConfig(),
) -> OptimizationResult:
    """Search t in [0, 1] maximising the chosen success-probability objective.

    This is empirical exploration only; nothing here proves optimality.
    """
    if counts is not None and not isinstance(counts, ClassCounts):
        counts = ClassCounts(tuple(counts))
    if k is None:
        if counts is None:
            raise DomainError("need k or counts")
        k = counts.k
    if counts is not None and counts.k != k:
        raise DomainError(f"k={k} disagrees with {counts.k} classes")
    if k < 1:
        raise DomainError("k must be >= 1")
    if objective not in OBJECTIVES:
        raise DomainError(f"unknown objective {objective!r}")
    if objective != "analytic-bound" and counts is None:
        raise DomainError(f"objective {objective!r} needs class counts")

    if objective == "analytic-bound":
        f = lambda t: lower_bound_h(k, t)  # noqa: E731
    elif objective == "exact":
        f = lambda t: exact_success_prob(counts, t, panels=search.panels).value  # noqa: E731
    else:
        from bestchoice.montecarlo import SimulationConfig, simulate

        # same master seed at every t: common random numbers
        def f(t: float) -> float:
            cfg = SimulationConfig(counts, t, search.trials, search.master_seed)
            return simulate(cfg).success_rate

    return maximize_on_unit_interval(f, search, objective)
