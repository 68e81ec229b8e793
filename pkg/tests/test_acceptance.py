"""Exit criteria. Each test records one PASS/FAIL line, shown in the
pytest terminal summary (also printed when run as a script)."""

import io
import math
import random
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from bestchoice.analytics import (
    binomial_mean_sum,
    density_f,
    exact_success_prob,
    no_record_prob_exact,
    optimal_threshold,
)
from bestchoice.cli import main as cli_main
from bestchoice.model import Seed, sample_realization
from bestchoice.montecarlo import SimulationConfig, simulate
from bestchoice.optimize import optimize_threshold
from bestchoice.strategy import build_two_stream

from conftest import ACCEPTANCE_LINES
from oracles import partition_two_stream

TRIALS = 10**6
Z = 4.0


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}" + (f" :: {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def wald_se(p, n):
    return math.sqrt(p * (1 - p) / n)


def test_01_half_rule():
    start = time.perf_counter()
    worst_margin = math.inf
    ok = True
    for i, counts in enumerate([[1, 1], [2, 3], [5, 5], [20, 20], [50, 50]]):
        s = simulate(SimulationConfig(counts, 0.5, TRIALS, 100 + i))
        exact = exact_success_prob(counts, 0.5).value
        ok &= s.success_rate >= 0.5 - Z * s.std_err
        ok &= exact >= 0.5 - 1e-9
        worst_margin = min(worst_margin, (s.success_rate - 0.5) / s.std_err)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60.0
    report(1, "1/2-rule at t=0.5", ok, f"min (rate-0.5)/se={worst_margin:.2f}, {elapsed:.1f}s")


def test_02_inverse_e_law():
    t = math.exp(-1)
    s = simulate(SimulationConfig([100], t, TRIALS, 200))
    ok = s.success_rate >= t - Z * s.std_err
    ns_se = wald_se(s.no_stop_rate, s.trials)
    ok &= abs(s.no_stop_rate - t) <= Z * ns_se
    report(2, "1/e-law, counts=[100]", ok, f"success={s.success_rate:.5f}, no_stop={s.no_stop_rate:.5f}")


def test_03_no_stop_law():
    ok, parts = True, []
    for k in (2, 3, 4):
        tk = optimal_threshold(k)
        s = simulate(SimulationConfig([10] * k, tk, TRIALS, 300 + k))
        target = tk / k
        assert abs(tk**k - target) < 1e-15
        ok &= abs(s.no_stop_rate - target) <= Z * wald_se(s.no_stop_rate, s.trials)
        parts.append(f"k={k}: {s.no_stop_rate:.5f} vs {target:.5f}")
    report(3, "no-stop probability t_k/k", ok, "; ".join(parts))


def test_04_general_bound():
    ok, parts = True, []
    for k in (2, 3, 4, 5):
        tk = optimal_threshold(k)
        s = simulate(SimulationConfig([3] * k, tk, TRIALS, 400 + k))
        ok &= s.success_rate >= tk - Z * s.std_err
        parts.append(f"k={k}: {s.success_rate:.4f}>={tk:.4f}")
    report(4, "success >= t_k at t_k", ok, "; ".join(parts))


def test_05_monotone_limit():
    values = [exact_success_prob([n, n], 0.5).value for n in range(1, 51)]
    steps_ok = all(b <= a + 1e-10 for a, b in zip(values, values[1:]))
    big = exact_success_prob([10**4, 10**4], 0.5)
    ok = steps_ok and abs(big.value - 0.5) <= 1e-3
    report(5, "monotone decrease to t_2", ok, f"p(1)={values[0]:.6f}, p(50)={values[-1]:.12f}, p(1e4)={big.value:.12f}")


def test_06_oracle_equivalence():
    rng = random.Random(2024)
    ok, worst = True, 0.0
    for i in range(20):
        k = rng.randint(1, 4)
        counts = [rng.randint(1, 5) for _ in range(k)]
        t = round(rng.uniform(0.0, 1.0), 4)
        exact = exact_success_prob(counts, t).value
        s = simulate(SimulationConfig(counts, t, TRIALS, 600 + i))
        se = max(wald_se(exact, TRIALS), 1e-12)
        z = abs(s.success_rate - exact) / se
        worst = max(worst, z)
        ok &= z <= Z
    for t in np.linspace(0, 1, 21):
        ok &= abs(exact_success_prob([1], t).value - (1 - t)) <= 1e-9
        ok &= abs(exact_success_prob([1, 1], t).value - (1 - t * t)) <= 1e-9
    report(6, "exact vs Monte Carlo, closed forms", ok, f"max |z|={worst:.2f}")


def test_07_analytic_identities():
    from scipy import integrate

    ok = True
    for k in range(1, 13):
        for s in np.arange(1, 10) / 10:
            ok &= abs(binomial_mean_sum(k, s) - k * (1 - s)) <= 1e-12
    for i in (1, 2, 3):
        for t in (0.0, 0.3, 0.5):
            val, _ = integrate.quad(lambda s: density_f(i, t, s), t, 1.0, epsabs=1e-13, epsrel=1e-13)
            ok &= abs(val - 1.0) <= 1e-10
    worst = 0.0
    for k in range(2, 11):
        err = abs(optimize_threshold(k=k).t_star - k ** (-1 / (k - 1)))
        worst = max(worst, err)
        ok &= err <= 1e-6
    report(7, "binomial identity, density normalisation, argmax h_k", ok, f"max argmax error={worst:.1e}")


def test_08_lemma_dominance():
    grid = np.round(np.arange(0, 21) * 0.05, 2)
    ok = True
    for n in range(21):
        for s in grid[1:]:
            for t in grid[grid <= s]:
                ok &= no_record_prob_exact(n, float(t), float(s)) >= t / s
    report(8, "no-record probability >= t/s", ok)


def test_09_reproducibility():
    outputs = []
    for workers in (1, 2, 8, 1):
        buf = io.StringIO()
        argv = ["simulate", "--classes", "5,5", "--t", "0.5", "--trials", str(TRIALS), "--seed", "9", "--workers", str(workers)]
        with redirect_stdout(buf):
            code = cli_main(argv)
        assert code == 0
        outputs.append(buf.getvalue().encode())
    ok = len(set(outputs)) == 1
    report(9, "byte-identical output across runs and workers {1,2,8}", ok)


def test_10_two_stream():
    ok, checked = True, 0
    for n in (2, 5, 20):
        for i in range(10**4):
            stream = sample_realization([n], Seed(1000 + n, i))
            ranks = [a.rank for a in stream.arrivals]
            two = build_two_stream(stream)
            pivot, better, worse = partition_two_stream(ranks)
            got0 = sorted(((a.rank, two.overall_rank_of(a)) for a in two.arrivals if a.class_id == 0))
            got1 = sorted(((a.rank, two.overall_rank_of(a)) for a in two.arrivals if a.class_id == 1))
            ok &= two.pivot_rank == pivot
            ok &= [r for _, r in got0] == better and [w for w, _ in got0] == list(range(1, len(better) + 1))
            ok &= [r for _, r in got1] == worse and [w for w, _ in got1] == list(range(1, len(worse) + 1))
            checked += 1
    report(10, "two-stream split vs brute-force partition", ok, f"{checked} streams")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
