"""Independent reference computations used by the tests.

Nothing here calls into the quadrature or the vectorised simulator.
"""

import itertools
import math


def _items(counts):
    return [(j, r) for j, n in enumerate(counts) for r in range(1, n + 1)]


def enumerated_success_prob(counts, t):
    """Exact success probability by enumeration, for tiny total counts.

    Each option arrives before ``t`` independently with probability ``t``.
    Given which ones do, the late options arrive in a uniformly random
    order, and the rule's outcome depends only on that order.
    """
    items = _items(counts)
    total = 0.0
    for early_mask in itertools.product((True, False), repeat=len(items)):
        early = [it for it, e in zip(items, early_mask) if e]
        late = [it for it, e in zip(items, early_mask) if not e]
        weight = t ** len(early) * (1 - t) ** len(late)
        if weight == 0.0:
            continue
        best = {}
        for j, r in early:
            best[j] = min(best.get(j, r), r)
        wins = 0
        for order in itertools.permutations(late):
            seen = dict(best)
            for j, r in order:
                if r < seen.get(j, math.inf):
                    wins += r == 1
                    break
                seen[j] = min(seen.get(j, r), r)
        total += weight * wins / math.factorial(len(late))
    return total


def partition_two_stream(overall_ranks):
    """Brute-force best/worst split of a time-ordered ranked stream."""
    pivot = overall_ranks[0]
    rest = overall_ranks[1:]
    better = sorted(r for r in rest if r < pivot)
    worse = sorted((r for r in rest if r > pivot), reverse=True)
    return pivot, better, worse
