"""Reproducible Monte Carlo estimates of threshold-rule outcome rates.

Trials are evaluated in vectorised batches. Trial ``i`` uses exactly the
arrival times that ``sample_realization(counts, Seed(master_seed, i))``
would produce, and the batch rule reproduces ``run_threshold_strategy``
on it, so every batch outcome can be replayed one trial at a time.

Work is split into fixed trial-index chunks, independent of the number of
workers, and only integer counters are aggregated. Results are therefore
bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from bestchoice.model import ClassCounts, trial_stride, trial_uniforms

SUCCESS, FAILURE, NO_STOP = 0, 1, 2
_CHUNK_DRAWS = 1 << 22


@dataclass(frozen=True)
class SimulationConfig:
    counts: ClassCounts
    threshold: float
    trials: int
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.counts, ClassCounts):
            object.__setattr__(self, "counts", ClassCounts(tuple(self.counts)))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SimulationStats:
    trials: int
    successes: int
    failures: int
    no_stops: int
    success_rate: float
    failure_rate: float
    no_stop_rate: float
    std_err: float
    ci95_low: float
    ci95_high: float

    @classmethod
    def from_counts(cls, successes: int, failures: int, no_stops: int) -> "SimulationStats":
        n = successes + failures + no_stops
        p = successes / n
        se = math.sqrt(p * (1.0 - p) / n)
        return cls(
            trials=n,
            successes=successes,
            failures=failures,
            no_stops=no_stops,
            success_rate=p,
            failure_rate=failures / n,
            no_stop_rate=no_stops / n,
            std_err=se,
            ci95_low=max(0.0, p - 1.96 * se),
            ci95_high=min(1.0, p + 1.96 * se),
        )

    def rate_std_err(self, rate: float) -> float:
        """Wald standard error of any rate estimated from these trials."""
        return math.sqrt(rate * (1.0 - rate) / self.trials)

    def to_dict(self) -> dict:
        return asdict(self)


def chunk_size(total: int) -> int:
    return max(1, _CHUNK_DRAWS // trial_stride(total))


def _chunks(trials: int, size: int) -> list[tuple[int, int]]:
    return [(a, min(a + size, trials)) for a in range(0, trials, size)]


def outcome_codes(counts: Sequence[int], times: np.ndarray, threshold: float) -> np.ndarray:
    """Per-trial outcome codes for rows of arrival times laid out class by class.

    Within class ``j`` column ``r`` is the option of rank ``r + 1``. The
    first record at or after the threshold is the earliest option that
    arrives at or after it and beats everything seen before it.
    """
    rows = times.shape[0]
    first_time = np.full((rows, len(counts)), np.inf)
    first_is_max = np.zeros((rows, len(counts)), dtype=bool)
    offset = 0
    for j, n in enumerate(counts):
        u = times[:, offset : offset + n]
        offset += n
        before = u < threshold
        # best rank seen before the threshold; n when nothing arrived yet
        best_before = np.where(before.any(axis=1), before.argmax(axis=1), n)
        eligible = ~before & (np.arange(n)[None, :] < best_before[:, None])
        masked = np.where(eligible, u, np.inf)
        pick = masked.argmin(axis=1)
        first_time[:, j] = masked[np.arange(rows), pick]
        first_is_max[:, j] = pick == 0
    cls = first_time.argmin(axis=1)
    stopped = np.isfinite(first_time[np.arange(rows), cls])
    won = first_is_max[np.arange(rows), cls]
    return np.where(stopped, np.where(won, SUCCESS, FAILURE), NO_STOP).astype(np.int8)


def trial_outcomes(counts, threshold: float, master_seed: int, start: int, stop: int) -> np.ndarray:
    """Outcome codes for trial indices ``start..stop-1``."""
    counts = counts if isinstance(counts, ClassCounts) else ClassCounts(tuple(counts))
    times = trial_uniforms(counts.total, master_seed, start, stop)
    return outcome_codes(counts.counts, times, threshold)


def _count_chunk(args) -> np.ndarray:
    counts, thresholds, master_seed, start, stop = args
    times = trial_uniforms(sum(counts), master_seed, start, stop)
    out = np.zeros((len(thresholds), 3), dtype=np.int64)
    for i, t in enumerate(thresholds):
        out[i] = np.bincount(outcome_codes(counts, times, t), minlength=3)
    return out


def _run(counts: ClassCounts, thresholds: Sequence[float], trials: int, master_seed: int, workers: int):
    jobs = [
        (counts.counts, tuple(thresholds), master_seed, a, b)
        for a, b in _chunks(trials, chunk_size(counts.total))
    ]
    if workers == 1 or len(jobs) == 1:
        parts = map(_count_chunk, jobs)
        total = sum(parts, np.zeros((len(thresholds), 3), dtype=np.int64))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(_count_chunk, jobs), np.zeros((len(thresholds), 3), dtype=np.int64))
    return [SimulationStats.from_counts(*map(int, row)) for row in total]


def simulate(cfg: SimulationConfig) -> SimulationStats:
    return _run(cfg.counts, [cfg.threshold], cfg.trials, cfg.master_seed, cfg.workers)[0]


def sweep(
    counts,
    thresholds: Sequence[float],
    trials_per_point: int,
    master_seed: int = 0,
    workers: int = 1,
) -> list[tuple[float, SimulationStats]]:
    """Outcome rates along a threshold grid with common random numbers.

    Every grid point sees the same realizations, so for example a trial
    that does not stop at ``t1`` does not stop at any ``t2 > t1`` either.
    """
    counts = counts if isinstance(counts, ClassCounts) else ClassCounts(tuple(counts))
    grid = sorted(float(t) for t in thresholds)
    if not grid:
        raise ValueError("empty threshold grid")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise ValueError("thresholds must lie in [0, 1]")
    if trials_per_point < 1:
        raise ValueError("trials_per_point must be >= 1")
    stats = _run(counts, grid, trials_per_point, master_seed, workers)
    return list(zip(grid, stats))


# --------------------------------------------------------------------------
# best-or-worst on a single ranked stream


@dataclass(frozen=True)
class BestOrWorstStats:
    n: int
    threshold: float
    trials: int
    successes: int
    best_hits: int
    worst_hits: int
    no_stops: int
    degenerate: int
    success_rate: float
    std_err: float
    ci95_low: float
    ci95_high: float
    degenerate_rate: float

    def to_dict(self) -> dict:
        return asdict(self)


def best_or_worst_codes(times: np.ndarray, threshold: float):
    """Vectorised best-or-worst rule on rows of times indexed by overall rank - 1.

    Returns boolean arrays ``(hit_best, hit_worst, stopped, degenerate)``.
    """
    rows, n = times.shape
    idx = np.arange(n)[None, :]
    row = np.arange(rows)
    pivot = times.argmin(axis=1)[:, None]
    before = times < threshold
    better = idx < pivot
    worse = idx > pivot
    # class 0 records are new bests, class 1 records new worsts; the pivot
    # is the sentinel for "nothing of this class seen yet"
    best0 = np.where(better & before, idx, pivot).min(axis=1)[:, None]
    worst1 = np.where(worse & before, idx, pivot).max(axis=1)[:, None]
    t0 = np.where(better & ~before & (idx < best0), times, np.inf)
    t1 = np.where(worse & ~before & (idx > worst1), times, np.inf)
    p0, p1 = t0.argmin(axis=1), t1.argmin(axis=1)
    f0, f1 = t0[row, p0], t1[row, p1]
    take0 = np.isfinite(f0) & (f0 <= f1)
    take1 = np.isfinite(f1) & ~take0
    hit_best = take0 & (p0 == 0)
    hit_worst = take1 & (p1 == n - 1)
    degenerate = (pivot[:, 0] == 0) | (pivot[:, 0] == n - 1)
    return hit_best, hit_worst, take0 | take1, degenerate


def _best_or_worst_chunk(args) -> np.ndarray:
    n, threshold, master_seed, start, stop = args
    times = trial_uniforms(n, master_seed, start, stop)
    hb, hw, stopped, deg = best_or_worst_codes(times, threshold)
    return np.array([hb.sum(), hw.sum(), (~stopped).sum(), deg.sum()], dtype=np.int64)


def simulate_best_or_worst(
    n: int, threshold: float, trials: int, master_seed: int = 0, workers: int = 1
) -> BestOrWorstStats:
    """Rate of selecting the best or the worst of ``n`` ranked options.

    Trial ``i`` is the single ranked stream
    ``sample_realization([n], Seed(master_seed, i))``.
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    jobs = [(n, threshold, master_seed, a, b) for a, b in _chunks(trials, chunk_size(n))]
    if workers == 1 or len(jobs) == 1:
        total = sum(map(_best_or_worst_chunk, jobs), np.zeros(4, dtype=np.int64))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(_best_or_worst_chunk, jobs), np.zeros(4, dtype=np.int64))
    best, worst, no_stops, degenerate = (int(v) for v in total)
    successes = best + worst
    p = successes / trials
    se = math.sqrt(p * (1.0 - p) / trials)
    return BestOrWorstStats(
        n=n,
        threshold=threshold,
        trials=trials,
        successes=successes,
        best_hits=best,
        worst_hits=worst,
        no_stops=no_stops,
        degenerate=degenerate,
        success_rate=p,
        std_err=se,
        ci95_low=max(0.0, p - 1.96 * se),
        ci95_high=min(1.0, p + 1.96 * se),
        degenerate_rate=degenerate / trials,
    )
