#!/usr/bin/env python3
"""Reproduce every reference table and figure data series into out/.

Usage: python scripts/make_tables.py [--outdir out] [--grid 1001] [--nmax 10]
"""

import argparse
import pathlib
import sys

from selection_games.cli import run


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="out")
    ap.add_argument("--grid", type=int, default=1001)
    ap.add_argument("--nmax", type=int, default=10)
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    jobs = [
        ("table3.csv", ["tables", "--which", "table3", "--n", "4"]),
        ("table4.csv", ["tables", "--which", "table4", "--n", "5"]),
        ("table5.csv", ["tables", "--which", "table5", "--n", "5"]),
        ("fig2.csv", ["tables", "--which", "fig2", "--n", str(args.nmax)]),
        ("fig3a.csv", ["tables", "--which", "fig3a", "--n", str(args.nmax)]),
        ("fig3b.csv", ["tables", "--which", "fig3b", "--n", str(args.nmax)]),
        ("fig3c.csv", ["tables", "--which", "fig3c", "--n", str(args.nmax)]),
    ]
    for name, argv in jobs:
        target = outdir / name
        code = run(argv + ["--grid", str(args.grid), "--out", str(target)])
        if code != 0:
            return code
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
