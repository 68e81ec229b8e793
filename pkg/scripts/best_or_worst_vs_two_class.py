"""Best-or-worst on one ranked stream versus the two-class model.

Given the first arrival's rank p and time v, the remaining n - 1 options
are iid uniform on (v, 1) and split into classes of sizes (p - 1, n - p),
so the construction's success probability is an average of exact
two-class values. This script prints both numbers side by side.

    python scripts/best_or_worst_vs_two_class.py --n 5,10,50 --t 0.5 --trials 1000000
"""

import argparse

from scipy import integrate

from bestchoice.analytics import exact_success_prob
from bestchoice.montecarlo import simulate_best_or_worst


def conditioned_two_class(n: int, t: float) -> float:
    total = 0.0
    for p in range(1, n + 1):
        sizes = [c for c in (p - 1, n - p) if c > 0]
        if not sizes:
            continue

        def integrand(v):
            shifted = max(0.0, (t - v) / (1.0 - v))
            return n * (1.0 - v) ** (n - 1) * exact_success_prob(sizes, shifted).value

        val, _ = integrate.quad(integrand, 0.0, 1.0, points=[t], limit=200)
        total += val / n
    return total


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", default="5,10,50")
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>4} {'simulated':>10} {'+-4se':>8} {'two-class':>10} {'degenerate':>10}")
    for n in (int(x) for x in args.n.split(",")):
        s = simulate_best_or_worst(n, args.t, args.trials, args.seed)
        ref = conditioned_two_class(n, args.t)
        print(f"{n:>4} {s.success_rate:>10.5f} {4 * s.std_err:>8.5f} {ref:>10.5f} {s.degenerate_rate:>10.4f}")


if __name__ == "__main__":
    main()
