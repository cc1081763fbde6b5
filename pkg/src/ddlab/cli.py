"""Command-line front end: sparsity / ber / pattern / recommend subcommands.

All commands are fully seeded; identical arguments produce byte-identical
output files. Configuration errors exit nonzero with a one-line diagnostic.
"""

from __future__ import annotations

import argparse
import json
import sys

from .channel import DOPPLER_RANGES, SPREAD, build_H_dt, case_config, sample_paths
from .domains import impulse_pattern
from .equalize import ChannelMode, recommend_domain
from .frames import DD, FREQ, TIME
from .harness import (
    SCHEME_TOKENS,
    Scenario,
    ber_csv,
    load_scenario,
    pattern_csv,
    run_ber,
    run_sparsity,
    scenario_from_json,
    scenario_to_json,
    sparsity_csv,
)
from .spectral import LayeredFactorization

_PATTERN_DOMAINS = {"dd": DD, "time": TIME, "freq": FREQ}


def parse_grid(text: str) -> list[float]:
    """Parse 'start:step:stop' (inclusive) or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(round((stop - start) / step))
        grid = [start + step * k for k in range(count + 1)]
        return [g for g in grid if g <= stop + 1e-9]
    return [float(p) for p in text.split(",")]


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _add_frame_args(p: argparse.ArgumentParser):
    p.add_argument("--P", type=int, default=256, help="frame length (default 256)")
    p.add_argument("--M", type=int, default=16, help="delay-grid size (default 16)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddlab")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sparsity", help="LPR/SPR sweep over window half-widths")
    sp.add_argument("--case", type=int, required=True, choices=(1, 2, 3, 4))
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--lc", default="0:1:32", help="L_c grid, start:step:stop")
    sp.add_argument("--doppler-range", choices=DOPPLER_RANGES, default=SPREAD)
    _add_frame_args(sp)

    bp = sub.add_parser("ber", help="Monte Carlo bit error rates")
    bp.add_argument("--case", type=int, choices=(1, 2, 3, 4), default=None)
    bp.add_argument("--schemes", default=None, help="comma list, e.g. sc,ofdm,otfs-dd")
    bp.add_argument("--snr", default=None, help="SNR grid in dB, start:step:stop")
    bp.add_argument("--channel", default=None, help="full | band:L_c | topk:L_c")
    bp.add_argument("--mod", choices=("qpsk", "16qam"), default=None)
    bp.add_argument("--trials", type=int, default=None)
    bp.add_argument("--min-errors", type=int, default=None)
    bp.add_argument("--scenario", default=None, help="scenario JSON file")
    bp.add_argument("--P", type=int, default=None)
    bp.add_argument("--M", type=int, default=None)
    bp.add_argument("--seed", type=int, default=None)
    bp.add_argument("--out", default=None)

    pp = sub.add_parser("pattern", help="received magnitudes of a unit probe")
    pp.add_argument("--case", type=int, required=True, choices=(1, 2, 3, 4))
    pp.add_argument("--domain-in", required=True, choices=sorted(_PATTERN_DOMAINS))
    pp.add_argument(
        "--domain-out",
        choices=sorted(_PATTERN_DOMAINS),
        default=None,
        help="observation domain (default: same as --domain-in)",
    )
    pp.add_argument("--probe", type=int, default=0)
    _add_frame_args(pp)

    rp = sub.add_parser("recommend", help="pick an equalization domain")
    rp.add_argument("--case", type=int, required=True, choices=(1, 2, 3, 4))
    rp.add_argument("--mode", choices=("rule", "metric"), default="rule")
    rp.add_argument("--lc", type=int, default=None, help="window half-width")
    _add_frame_args(rp)
    return ap


def _cmd_sparsity(args) -> str:
    cfg = case_config(args.case, args.P, args.M, doppler_range=args.doppler_range)
    lcs = [int(v) for v in parse_grid(args.lc)]
    for lc in lcs:
        if 2 * lc + 1 > args.P:
            raise ValueError(f"window 2*{lc}+1 exceeds P={args.P}")
    sc = Scenario(cfg=cfg, trials=args.trials, seed=args.seed)
    return sparsity_csv(run_sparsity(sc, lcs))


def _cmd_ber(args) -> str:
    if args.scenario is not None:
        data = scenario_to_json(load_scenario(args.scenario))
    elif args.case is not None:
        data = {}
    else:
        raise ValueError("ber needs --case or --scenario")

    # explicit flags override scenario-file fields
    if args.case is not None:
        data["case"] = args.case
    if args.P is not None:
        data["P"] = args.P
        data.pop("N", None)
    if args.M is not None:
        data["M"] = args.M
        data.pop("N", None)
    if args.schemes is not None:
        tokens = args.schemes.split(",")
        unknown = [t for t in tokens if t not in SCHEME_TOKENS]
        if unknown:
            raise ValueError(
                f"unknown schemes {unknown}; choose from {sorted(SCHEME_TOKENS)}"
            )
        data["schemes"] = tokens
    if args.snr is not None:
        data["snr_db"] = parse_grid(args.snr)
    if args.channel is not None:
        ChannelMode.parse(args.channel)  # validate early
        data["channel"] = args.channel
    if args.mod is not None:
        data["mod"] = args.mod
    if args.trials is not None:
        data["trials"] = args.trials
    if args.min_errors is not None:
        data["min_bit_errors"] = args.min_errors
    if args.seed is not None:
        data["seed"] = args.seed

    sc = scenario_from_json(data)
    return ber_csv(run_ber(sc))


def _cmd_pattern(args) -> str:
    cfg = case_config(args.case, args.P, args.M)
    fact = LayeredFactorization(cfg.P, cfg.M, cfg.N)
    paths = sample_paths(cfg, args.seed)
    domain_in = _PATTERN_DOMAINS[args.domain_in]
    domain_out = _PATTERN_DOMAINS[args.domain_out] if args.domain_out else domain_in
    mags = impulse_pattern(paths, domain_in, args.probe, fact, domain_out)
    return pattern_csv(mags, domain_out, args.probe, args.case, args.seed)


def _cmd_recommend(args) -> str:
    cfg = case_config(args.case, args.P, args.M)
    H = build_H_dt(sample_paths(cfg, args.seed), cfg.P)
    lc = args.lc if args.lc is not None else int(cfg.T_d)
    rec = recommend_domain(cfg=cfg, H_dt=H, mode=args.mode, L_c=lc)
    payload = {"domain": rec.domain, "rule_fired": rec.rule_fired, "metrics": rec.metrics}
    return json.dumps(payload, sort_keys=True) + "\n"


_COMMANDS = {
    "sparsity": _cmd_sparsity,
    "ber": _cmd_ber,
    "pattern": _cmd_pattern,
    "recommend": _cmd_recommend,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(text, args.out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
