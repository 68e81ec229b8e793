"""Arrival model: k non-empty classes, iid uniform arrival times on (0, 1).

Only the uniform model is implemented. A continuous arrival-time
distribution F reduces to it through the time change u = F(t), so a
threshold t under F is the threshold F(t) here.

Randomness is counter based. Trial ``i`` of master seed ``m`` owns the
block of Philox outputs ``[i * S, (i + 1) * S)`` of the stream keyed by
``m``, where ``S`` is the total option count rounded up to a multiple of
four (one Philox counter step). The option of class ``j`` with
within-class rank ``r`` takes its arrival time from slot
``offset_j + r - 1``. Because the rank labels are fixed and the times are
iid, the arrival order of ranks inside a class is a uniform permutation,
independent of the times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

_UINT64_MAX = 2**64 - 1
_DRAWS_PER_STEP = 4  # Philox4x64 yields four 64-bit words per counter step


class ModelViolationError(ValueError):
    """Raised when inputs break the arrival model (e.g. an empty class)."""


@dataclass(frozen=True)
class ClassCounts:
    """Per-class option counts ``(n_1, ..., n_k)``; every class is non-empty."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if len(counts) == 0:
            raise ModelViolationError("need at least one class")
        if any(c < 1 for c in counts):
            raise ModelViolationError(f"every class needs at least one option, got {counts}")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def parse(cls, text: str) -> "ClassCounts":
        """Parse ``"3,5,2"``."""
        try:
            values = [int(part) for part in text.split(",") if part.strip()]
        except ValueError as exc:
            raise ModelViolationError(f"bad class list {text!r}") from exc
        return cls(tuple(values))

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for c in self.counts:
            out.append(acc)
            acc += c
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True, order=True)
class Arrival:
    # field order gives the (time, class, rank) tie-break under sorting
    time: float
    class_id: int
    rank: int


@dataclass(frozen=True)
class Realization:
    arrivals: tuple[Arrival, ...]
    counts: ClassCounts

    def __post_init__(self) -> None:
        object.__setattr__(self, "arrivals", tuple(sorted(self.arrivals)))

    def __len__(self) -> int:
        return len(self.arrivals)


@dataclass(frozen=True)
class Seed:
    master_seed: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= _UINT64_MAX:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.trial_index < 0:
            raise ValueError("trial_index must be non-negative")


def trial_stride(total: int) -> int:
    """Number of raw draws reserved per trial for ``total`` options."""
    return -(-total // _DRAWS_PER_STEP) * _DRAWS_PER_STEP


def _to_unit_open(raw: np.ndarray) -> np.ndarray:
    # top 53 bits, centred in their cell: never exactly 0 or 1
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def trial_uniforms(total: int, master_seed: int, start: int, stop: int) -> np.ndarray:
    """Arrival times for trials ``start..stop-1`` as a ``(stop - start, total)`` array.

    Row ``i - start`` is exactly what :func:`sample_realization` uses for
    trial ``i``, whatever ``start`` is.
    """
    if stop < start or start < 0:
        raise ValueError("need 0 <= start <= stop")
    stride = trial_stride(total)
    bitgen = np.random.Philox(key=master_seed)
    bitgen.advance(start * stride // _DRAWS_PER_STEP)
    raw = bitgen.random_raw((stop - start) * stride).reshape(stop - start, stride)
    return _to_unit_open(raw[:, :total])


def sample_realization(counts: ClassCounts | Sequence[int], seed: Seed) -> Realization:
    if not isinstance(counts, ClassCounts):
        counts = ClassCounts(tuple(counts))
    times = trial_uniforms(counts.total, seed.master_seed, seed.trial_index, seed.trial_index + 1)[0]
    arrivals = []
    for class_id, (offset, n) in enumerate(zip(counts.offsets, counts.counts)):
        for r in range(n):
            arrivals.append(Arrival(float(times[offset + r]), class_id, r + 1))
    return Realization(tuple(arrivals), counts)


def class_maxima_times(r: Realization) -> list[float]:
    """Arrival time of the rank-1 option of each class."""
    out = [float("nan")] * r.counts.k
    for a in r.arrivals:
        if a.rank == 1:
            out[a.class_id] = a.time
    return out
