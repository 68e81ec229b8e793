import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bestchoice.analytics import exact_success_prob, lower_bound_h
from bestchoice.model import ClassCounts
from bestchoice.montecarlo import (
    NO_STOP,
    SimulationConfig,
    SimulationStats,
    chunk_size,
    simulate,
    simulate_best_or_worst,
    sweep,
    trial_outcomes,
)

INV_E = math.exp(-1)


def within(rate, target, trials, z=4.0):
    se = math.sqrt(target * (1 - target) / trials)
    return abs(rate - target) <= z * max(se, 1e-12)


def test_stats_from_counts():
    s = SimulationStats.from_counts(30, 50, 20)
    assert (s.trials, s.success_rate, s.failure_rate, s.no_stop_rate) == (100, 0.3, 0.5, 0.2)
    assert s.std_err == pytest.approx(math.sqrt(0.3 * 0.7 / 100))
    assert s.ci95_low == pytest.approx(0.3 - 1.96 * s.std_err)
    edge = SimulationStats.from_counts(10, 0, 0)
    assert edge.ci95_high == 1.0 and edge.std_err == 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig([1], 0.5, 0)
    with pytest.raises(ValueError):
        SimulationConfig([1], 1.5, 10)
    with pytest.raises(ValueError):
        SimulationConfig([0, 1], 0.5, 10)


def test_two_singletons_rate():
    s = simulate(SimulationConfig([1, 1], 0.5, 10**6, 1))
    assert abs(s.success_rate - 0.75) <= 4 * s.std_err


def test_no_stop_rate_is_t_to_the_k():
    s = simulate(SimulationConfig([50, 50], 0.5, 10**6, 2))
    assert within(s.no_stop_rate, 0.25, s.trials)


def test_inverse_e_law_single_class():
    s = simulate(SimulationConfig([100], INV_E, 10**6, 3))
    assert s.success_rate >= INV_E - 4 * s.std_err
    assert within(s.no_stop_rate, INV_E, s.trials)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4), st.floats(0, 1), st.integers(1, 3000))
@settings(max_examples=40, deadline=None)
def test_outcomes_are_conserved(counts, t, trials):
    s = simulate(SimulationConfig(counts, t, trials, 9))
    assert s.successes + s.failures + s.no_stops == trials
    assert 0.0 <= s.ci95_low <= s.success_rate <= s.ci95_high <= 1.0


@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_does_not_change_results(workers):
    counts = ClassCounts((3, 2))
    trials = 3 * chunk_size(counts.total) + 17
    one = simulate(SimulationConfig(counts, 0.4, trials, 5, workers=1))
    many = simulate(SimulationConfig(counts, 0.4, trials, 5, workers=workers))
    assert one == many


def test_sweep_small_grid():
    rows = sweep([1, 1], [1.0, 0.0, 0.5], 200_000, 4)
    assert [t for t, _ in rows] == [0.0, 0.5, 1.0]
    for (t, s), target in zip(rows, (1.0, 0.75, 0.0)):
        assert within(s.success_rate, target, s.trials)


def test_sweep_threshold_one_never_stops():
    for counts in ([1], [4, 2], [7, 7, 7]):
        (_, s), = sweep(counts, [1.0], 1000, 0)
        assert s.success_rate == 0.0 and s.no_stop_rate == 1.0


def test_sweep_errors():
    with pytest.raises(ValueError):
        sweep([1], [], 10)
    with pytest.raises(ValueError):
        sweep([1], [0.5, 1.2], 10)


def test_sweep_dominance_twenty_per_class():
    grid = np.round(np.arange(0, 21) * 0.05, 2)
    for t, s in sweep([20, 20], grid, 100_000, 6):
        exact = exact_success_prob([20, 20], t).value
        assert s.ci95_low <= exact + 1e-9
        assert s.success_rate >= lower_bound_h(2, t) - 4 * s.std_err
        assert abs(s.success_rate - exact) <= 4 * max(s.std_err, 1e-12)


def test_common_random_numbers_keep_no_stop_monotone():
    counts = [3, 4]
    ts = [0.1, 0.3, 0.5, 0.7, 0.9]
    codes = [trial_outcomes(counts, t, 12, 0, 20_000) for t in ts]
    for lo, hi in zip(codes, codes[1:]):
        assert np.all(hi[lo == NO_STOP] == NO_STOP)


def test_sweep_matches_separate_simulations():
    rows = sweep([2, 3], [0.2, 0.6], 5000, 21)
    for t, s in rows:
        assert s == simulate(SimulationConfig([2, 3], t, 5000, 21))


def test_best_or_worst_n2_always_succeeds_at_zero():
    s = simulate_best_or_worst(2, 0.0, 5000, 1)
    assert s.success_rate == 1.0
    assert s.best_hits + s.worst_hits == 5000


def test_best_or_worst_single_option_is_degenerate():
    s = simulate_best_or_worst(1, 0.5, 1000, 1)
    assert s.success_rate == 0.0 and s.degenerate_rate == 1.0


def test_best_or_worst_stable_across_seeds():
    a = simulate_best_or_worst(50, 0.5, 10**6, 1)
    b = simulate_best_or_worst(50, 0.5, 10**6, 2)
    assert abs(a.success_rate - b.success_rate) <= 4 * math.hypot(a.std_err, b.std_err)
    assert within(a.degenerate_rate, 2 / 50, a.trials)


def test_best_or_worst_against_conditioned_two_class():
    # Given the pivot's overall rank p and arrival time v, the other n - 1
    # options are iid uniform on (v, 1): a two-class problem with class
    # sizes (p - 1, n - p) and the threshold mapped to (t - v) / (1 - v).
    # Empty classes simply drop out.
    from scipy import integrate

    n, t = 8, 0.5
    s = simulate_best_or_worst(n, t, 400_000, 3)
    total = 0.0
    for p in range(1, n + 1):
        sizes = [c for c in (p - 1, n - p) if c > 0]

        def integrand(v):
            shifted = max(0.0, (t - v) / (1 - v))
            return n * (1 - v) ** (n - 1) * exact_success_prob(sizes, shifted).value

        val, _ = integrate.quad(integrand, 0, 1, points=[t], epsabs=1e-10)
        total += val / n
    assert abs(s.success_rate - total) <= 4 * s.std_err
