"""Threshold rules on realizations, and the best-or-worst two-stream split."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from bestchoice.model import Arrival, ClassCounts, Realization


class OutcomeKind(str, enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    NO_STOP = "no_stop"


@dataclass(frozen=True)
class ThresholdStrategy:
    """Wait until ``threshold``, then take the first within-class record."""

    threshold: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    stop_time: Optional[float] = None
    stopped_class: Optional[int] = None
    stopped_rank: Optional[int] = None

    @property
    def stopped(self) -> bool:
        return self.kind is not OutcomeKind.NO_STOP


NO_STOP = Outcome(OutcomeKind.NO_STOP)


def _records(arrivals: Iterable[Arrival]):
    best: dict[int, int] = {}
    for a in arrivals:
        if a.class_id not in best or a.rank < best[a.class_id]:
            best[a.class_id] = a.rank
            yield a


def run_threshold_strategy(r, s: ThresholdStrategy) -> Outcome:
    """Run ``s`` on anything with a time-ordered ``arrivals`` sequence.

    An arrival exactly at the threshold is eligible. Arrivals after the
    stop are never looked at.
    """
    for a in _records(r.arrivals):
        if a.time >= s.threshold:
            kind = OutcomeKind.SUCCESS if a.rank == 1 else OutcomeKind.FAILURE
            return Outcome(kind, a.time, a.class_id, a.rank)
    return NO_STOP


@dataclass(frozen=True)
class TwoStreamRealization:
    """One ranked stream split around its first arrival (the pivot).

    Class 0 holds the options ranked better than the pivot, with
    within-class rank 1 = best overall. Class 1 holds the options ranked
    worse than the pivot, ordered the other way round: its within-class
    rank 1 is the worst option overall, so a class-1 record is a new
    worst-so-far. The pivot belongs to neither class.
    """

    pivot_rank: int
    pivot_time: float
    arrivals: tuple[Arrival, ...]
    class_sizes: tuple[int, int]
    overall_ranks: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.overall_ranks)

    @property
    def empty_classes(self) -> tuple[int, ...]:
        return tuple(j for j, size in enumerate(self.class_sizes) if size == 0)

    @property
    def degenerate(self) -> bool:
        return bool(self.empty_classes)

    def overall_rank_of(self, a: Arrival) -> int:
        if a.class_id == 0:
            return a.rank
        return self.n + 1 - a.rank


def build_two_stream(stream: Realization) -> TwoStreamRealization:
    """Split a single-class realization whose ranks are overall ranks (1 = best)."""
    if stream.counts.k != 1:
        raise ValueError("two-stream construction needs a single ranked stream")
    arrivals = stream.arrivals
    n = len(arrivals)
    pivot = arrivals[0]
    p = pivot.rank
    derived = []
    for a in arrivals[1:]:
        if a.rank < p:
            derived.append(Arrival(a.time, 0, a.rank))
        else:
            derived.append(Arrival(a.time, 1, n + 1 - a.rank))
    return TwoStreamRealization(
        pivot_rank=p,
        pivot_time=pivot.time,
        arrivals=tuple(derived),
        class_sizes=(p - 1, n - p),
        overall_ranks=tuple(a.rank for a in arrivals),
    )


def ranked_stream(overall_ranks, times=None) -> Realization:
    """Build a single-class realization from time-ordered overall ranks."""
    n = len(overall_ranks)
    if times is None:
        times = [(i + 1) / (n + 1) for i in range(n)]
    arrivals = tuple(Arrival(float(u), 0, int(r)) for u, r in zip(times, overall_ranks))
    return Realization(arrivals, ClassCounts((n,)))


@dataclass(frozen=True)
class BestOrWorstOutcome:
    outcome: Outcome
    hit_best: bool
    hit_worst: bool
    selected_overall_rank: Optional[int]
    empty_classes: tuple[int, ...]

    @property
    def success(self) -> bool:
        return self.hit_best or self.hit_worst


def run_best_or_worst(stream: Realization, s: ThresholdStrategy) -> BestOrWorstOutcome:
    two = build_two_stream(stream)
    out = run_threshold_strategy(two, s)
    if not out.stopped:
        return BestOrWorstOutcome(out, False, False, None, two.empty_classes)
    overall = two.overall_rank_of(Arrival(out.stop_time, out.stopped_class, out.stopped_rank))
    return BestOrWorstOutcome(
        out,
        hit_best=overall == 1,
        hit_worst=overall == two.n,
        selected_overall_rank=overall,
        empty_classes=two.empty_classes,
    )
