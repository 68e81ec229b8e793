"""Empirical, exact and bound curves for several class layouts, one CSV each.

    python scripts/bound_curves.py --outdir results/curves --trials 200000
"""

import argparse
from pathlib import Path

from bestchoice.cli import main as cli

LAYOUTS = ["1,1", "2,3", "5,5", "20,20", "3,3,3", "10,10,10,10", "100"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="results/curves")
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--grid", default="0:1:0.05")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for layout in LAYOUTS:
        path = outdir / f"sweep_{layout.replace(',', '-')}.csv"
        code = cli(
            ["sweep", "--classes", layout, "--grid", args.grid, "--trials", str(args.trials),
             "--seed", str(args.seed), "--out", str(path)]
        )
        print(f"{layout:>14}  exit={code}  {path}")


if __name__ == "__main__":
    main()
