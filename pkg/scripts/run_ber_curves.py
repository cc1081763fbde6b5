#!/usr/bin/env python3
"""Figure-grade BER curves: the five system setups, full and truncated channels.

Per case, runs SC / OFDM / OTFS (dD, dt, and fD equalization) over the SNR
grid twice: with the full channel matrix and with the band truncation at
L_c = T_d. Writes ber_case<k>_full.csv and ber_case<k>_band.csv.
"""

import argparse
import pathlib

from ddlab import Scenario, case_config
from ddlab.equalize import ChannelMode
from ddlab.harness import SCHEME_TOKENS, ber_csv, run_ber

ALL_SCHEMES = ("sc", "ofdm", "otfs-dd", "otfs-dt", "otfs-fd")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--P", type=int, default=1024)
    ap.add_argument("--M", type=int, default=16)
    ap.add_argument("--snr", default="0:2:20", help="start:step:stop in dB")
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--min-errors", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20260810)
    ap.add_argument("--outdir", default=".")
    args = ap.parse_args()

    from ddlab.cli import parse_grid

    snr_grid = tuple(parse_grid(args.snr))
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for case in (1, 2, 3, 4):
        cfg = case_config(case, args.P, args.M)
        for label, mode in (
            ("full", ChannelMode()),
            ("band", ChannelMode("band", int(cfg.T_d))),
        ):
            sc = Scenario(
                cfg=cfg,
                schemes=tuple(SCHEME_TOKENS[t] for t in ALL_SCHEMES),
                channel_mode=mode,
                snr_grid_db=snr_grid,
                trials=args.trials,
                min_bit_errors=args.min_errors,
                seed=args.seed,
            )
            path = outdir / f"ber_case{case}_{label}.csv"
            path.write_text(ber_csv(run_ber(sc)))
            print(f"case {case} {label}: wrote {path}")


if __name__ == "__main__":
    main()
