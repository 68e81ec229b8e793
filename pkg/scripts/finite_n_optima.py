"""Best threshold for equal class sizes, exact objective, against t_k.

    python scripts/finite_n_optima.py --kmax 5 --sizes 1,2,3,5,10,20,50
"""

import argparse
import csv
import sys

from bestchoice.analytics import lower_bound_h, optimal_threshold
from bestchoice.optimize import optimize_threshold


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=int, default=5)
    ap.add_argument("--sizes", default="1,2,3,5,10,20,50")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["k", "n", "t_star", "p_star", "t_k", "h_at_t_k"])
    for k in range(1, args.kmax + 1):
        tk = optimal_threshold(k)
        for n in sizes:
            res = optimize_threshold(counts=[n] * k, objective="exact")
            out.writerow([k, n, f"{res.t_star:.8f}", f"{res.value:.10f}", f"{tk:.8f}", f"{lower_bound_h(k, tk):.10f}"])


if __name__ == "__main__":
    main()
