#!/usr/bin/env python3
"""Figure-grade sparsity curves: LPR/SPR vs window half-width, all four cases.

Writes one CSV per case (sparsity_case<k>.csv). Expect a few minutes per case
at the default 200 realizations with P=1024.
"""

import argparse
import pathlib

from ddlab import Scenario, case_config
from ddlab.harness import run_sparsity, sparsity_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--P", type=int, default=1024)
    ap.add_argument("--M", type=int, default=16)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--lc-max", type=int, default=32)
    ap.add_argument("--seed", type=int, default=20260810)
    ap.add_argument("--outdir", default=".")
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for case in (1, 2, 3, 4):
        cfg = case_config(case, args.P, args.M)
        sc = Scenario(cfg=cfg, trials=args.trials, seed=args.seed)
        records = run_sparsity(sc, range(args.lc_max + 1))
        path = outdir / f"sparsity_case{case}.csv"
        path.write_text(sparsity_csv(records))
        print(f"case {case}: wrote {path}")


if __name__ == "__main__":
    main()
