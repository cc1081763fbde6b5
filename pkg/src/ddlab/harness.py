"""Seeded Monte Carlo engine for BER and sparsity sweeps, plus CSV emission.

Every random quantity is drawn from a private generator substream derived
injectively from (master seed, case, scheme, SNR index, trial, stream role),
so repeated runs are bit-identical and the three OTFS equalization variants
of one scheme see the same channels, bits, and noise. SNR is defined against
unit channel power and unit symbol power: noise_variance = 10**(-snr_dB/10).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import (
    SPREAD,
    ChannelCaseConfig,
    PathSet,
    build_H_dt,
    case_config,
    sample_paths,
)
from .domains import to_dD_otfs, to_fD
from .equalize import ChannelMode, EqualizerSpec, equalize
from .frames import DD_OTFS, DT, FD, TIME, DomainMatrix, SymbolFrame
from .modem import Scheme, constellation, hard_demap, map_bits, modulate
from .sparsity import SparsityRecord, lpr_curve, spr_curve
from .spectral import LayeredFactorization

STREAM_CHANNEL = 0
STREAM_BITS = 1
STREAM_NOISE = 2

_SCHEME_CODE = {Scheme.SC: 0, Scheme.OFDM: 1, Scheme.OTFS: 2}

# CLI tokens for (scheme, equalization domain) pairs
SCHEME_TOKENS = {
    "sc": (Scheme.SC, DT),
    "ofdm": (Scheme.OFDM, FD),
    "otfs-dd": (Scheme.OTFS, DD_OTFS),
    "otfs-dt": (Scheme.OTFS, DT),
    "otfs-fd": (Scheme.OTFS, FD),
}
_PAIR_TOKENS = {pair: token for token, pair in SCHEME_TOKENS.items()}


def substream_seed(
    master_seed: int, case: int, scheme_code: int, snr_index: int, trial: int, stream: int
) -> int:
    """64-bit seed derived injectively from the sweep coordinates."""
    ss = np.random.SeedSequence(
        master_seed, spawn_key=(case, scheme_code, snr_index, trial, stream)
    )
    return int(ss.generate_state(1, np.uint64)[0])


def awgn(v: np.ndarray, noise_variance: float, noise_seed: int) -> np.ndarray:
    """Add circular complex Gaussian noise with the given per-sample variance."""
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    v = np.asarray(v, dtype=complex)
    if noise_variance == 0.0:
        return v.copy()
    rng = np.random.default_rng(noise_seed)
    scale = np.sqrt(noise_variance / 2.0)
    noise = scale * (rng.standard_normal(v.shape) + 1j * rng.standard_normal(v.shape))
    return v + noise


@dataclass(frozen=True)
class Scenario:
    """One Monte Carlo experiment: channel case, schemes, SNR grid, budgets."""

    cfg: ChannelCaseConfig
    schemes: tuple[tuple[Scheme, str], ...] = ((Scheme.SC, DT),)
    channel_mode: ChannelMode = ChannelMode()
    snr_grid_db: tuple[float, ...] = tuple(range(0, 21, 2))
    trials: int = 100
    min_trials: int = 1
    min_bit_errors: int = 200
    seed: int = 0
    constellation: str = "qpsk"
    ideal_channel: bool = False  # test hook: replace the channel with identity

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snr_grid_db:
            raise ValueError("SNR grid must be non-empty")
        if self.min_trials < 1 or self.min_bit_errors < 0:
            raise ValueError("invalid early-stop thresholds")

    @property
    def fact(self) -> LayeredFactorization:
        return LayeredFactorization(self.cfg.P, self.cfg.M, self.cfg.N)


@dataclass(frozen=True)
class BerRecord:
    """One measured BER point of a Monte Carlo sweep."""

    scheme: str
    eq_domain: str
    channel_mode: str
    snr_db: float
    bit_errors: int
    bits_sent: int
    ber: float
    seed: int

    def __post_init__(self):
        if self.bits_sent and abs(self.ber - self.bit_errors / self.bits_sent) > 1e-12:
            raise ValueError("ber must equal bit_errors / bits_sent")
        if not 0.0 <= self.ber <= 1.0:
            raise ValueError("ber must lie in [0, 1]")


def _identity_channel(P: int) -> DomainMatrix:
    return DomainMatrix(DT, np.eye(P, dtype=complex))


def run_ber(sc: Scenario) -> list[BerRecord]:
    """Monte Carlo bit error rates over the scenario's (scheme, SNR) grid.

    Per trial: draw a fresh channel realization (block fading), random bits,
    modulate, pass through the channel plus AWGN, equalize with the perfectly
    known (optionally truncated) channel, hard-demap, and accumulate integer
    error counts. A point stops early once both the minimum error count and
    the minimum trial count are reached.
    """
    const = constellation(sc.constellation)
    cfg = sc.cfg
    fact = sc.fact
    case = cfg.case_id or 0
    n_bits = cfg.P * const.bits_per_symbol
    records = []
    for scheme, eq_domain in sc.schemes:
        code = _SCHEME_CODE[scheme]
        for snr_index, snr_db in enumerate(sc.snr_grid_db):
            noise_variance = 10.0 ** (-snr_db / 10.0)
            spec = EqualizerSpec("mmse", eq_domain, sc.channel_mode, noise_variance)
            errors = 0
            bits_sent = 0
            for trial in range(sc.trials):
                if sc.ideal_channel:
                    H = _identity_channel(cfg.P)
                else:
                    ch_seed = substream_seed(
                        sc.seed, case, code, snr_index, trial, STREAM_CHANNEL
                    )
                    H = build_H_dt(sample_paths(cfg, ch_seed), cfg.P)
                bit_seed = substream_seed(
                    sc.seed, case, code, snr_index, trial, STREAM_BITS
                )
                bits = np.random.default_rng(bit_seed).integers(0, 2, n_bits)
                x_t = modulate(scheme, map_bits(bits, const), fact)
                noise_seed = substream_seed(
                    sc.seed, case, code, snr_index, trial, STREAM_NOISE
                )
                y = awgn(H.entries @ x_t.values, noise_variance, noise_seed)
                est = equalize(scheme, spec, H, SymbolFrame(TIME, y), fact)
                rx_bits = hard_demap(est, const)
                errors += int(np.count_nonzero(bits != rx_bits))
                bits_sent += n_bits
                if errors >= sc.min_bit_errors and trial + 1 >= sc.min_trials:
                    break
            records.append(
                BerRecord(
                    scheme=scheme.value,
                    eq_domain=eq_domain,
                    channel_mode=str(sc.channel_mode),
                    snr_db=float(snr_db),
                    bit_errors=errors,
                    bits_sent=bits_sent,
                    ber=errors / bits_sent,
                    seed=sc.seed,
                )
            )
    return records


def run_sparsity(sc: Scenario, lc_grid) -> list[SparsityRecord]:
    """Average LPR/SPR over realizations for dt, fD, and dD_otfs domains.

    All three domains are measured on the same realizations so the Fig.-3
    style orderings are paired comparisons.
    """
    lcs = list(lc_grid)
    cfg = sc.cfg
    fact = sc.fact
    case = cfg.case_id or 0
    domains = (DT, FD, DD_OTFS)
    lpr_sums = {d: np.zeros(len(lcs)) for d in domains}
    spr_sums = {d: np.zeros(len(lcs)) for d in domains}
    for trial in range(sc.trials):
        seed = substream_seed(sc.seed, case, 0, 0, trial, STREAM_CHANNEL)
        H_dt = build_H_dt(sample_paths(cfg, seed), cfg.P)
        mats = {DT: H_dt, FD: to_fD(H_dt), DD_OTFS: to_dD_otfs(H_dt, fact)}
        for d in domains:
            lpr_sums[d] += lpr_curve(mats[d], lcs)
            spr_sums[d] += spr_curve(mats[d], lcs)
    records = []
    for d in domains:
        for i, lc in enumerate(lcs):
            records.append(
                SparsityRecord(
                    domain=d,
                    case_id=cfg.case_id,
                    L_c=int(lc),
                    lpr=float(lpr_sums[d][i] / sc.trials),
                    spr=float(spr_sums[d][i] / sc.trials),
                    realizations=sc.trials,
                    seed=sc.seed,
                )
            )
    return records


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def sparsity_csv(records: list[SparsityRecord]) -> str:
    lines = ["case,domain,metric,L_c,value,realizations,seed"]
    for r in records:
        for metric, value in (("lpr", r.lpr), ("spr", r.spr)):
            lines.append(
                f"{r.case_id},{r.domain},{metric},{r.L_c},{_fmt(value)},"
                f"{r.realizations},{r.seed}"
            )
    return "\n".join(lines) + "\n"


def ber_csv(records: list[BerRecord]) -> str:
    lines = ["scheme,eq_domain,channel_mode,snr_db,bit_errors,bits_sent,ber,seed"]
    for r in records:
        lines.append(
            f"{r.scheme},{r.eq_domain},{r.channel_mode},{_fmt(r.snr_db)},"
            f"{r.bit_errors},{r.bits_sent},{_fmt(r.ber)},{r.seed}"
        )
    return "\n".join(lines) + "\n"


def pattern_csv(magnitudes: np.ndarray, domain: str, probe: int, case, seed: int) -> str:
    header = f"# domain={domain} probe={probe} case={case} seed={seed}"
    rows = [",".join(_fmt(float(v)) for v in row) for row in magnitudes]
    return header + "\n" + "\n".join(rows) + "\n"


def scenario_to_json(sc: Scenario) -> dict:
    return {
        "case": sc.cfg.case_id,
        "L": sc.cfg.L,
        "T_d": sc.cfg.T_d,
        "F_d": sc.cfg.F_d,
        "R_f": sc.cfg.R_f,
        "P": sc.cfg.P,
        "M": sc.cfg.M,
        "N": sc.cfg.N,
        "doppler_range": sc.cfg.doppler_range,
        "schemes": [_PAIR_TOKENS[pair] for pair in sc.schemes],
        "channel": str(sc.channel_mode),
        "snr_db": list(sc.snr_grid_db),
        "trials": sc.trials,
        "min_trials": sc.min_trials,
        "min_bit_errors": sc.min_bit_errors,
        "seed": sc.seed,
        "mod": sc.constellation,
        "ideal_channel": sc.ideal_channel,
    }


def scenario_from_json(data: dict) -> Scenario:
    """Build a Scenario from its JSON mirror (tabulated case or custom)."""
    case = data.get("case")
    P = int(data.get("P", 256))
    M = int(data.get("M", 16))
    N = int(data.get("N", P // M))
    doppler_range = data.get("doppler_range", SPREAD)
    if case is not None and "L" not in data:
        cfg = case_config(int(case), P, M, N, doppler_range)
    else:
        cfg = ChannelCaseConfig(
            case_id=case,
            L=int(data["L"]),
            T_d=float(data["T_d"]),
            F_d=float(data["F_d"]),
            R_f=float(data["R_f"]),
            P=P,
            M=M,
            N=N,
            doppler_range=doppler_range,
        )
    tokens = data.get("schemes", ["sc"])
    try:
        schemes = tuple(SCHEME_TOKENS[t] for t in tokens)
    except KeyError as exc:
        raise ValueError(f"unknown scheme token {exc.args[0]!r}") from None
    return Scenario(
        cfg=cfg,
        schemes=schemes,
        channel_mode=ChannelMode.parse(data.get("channel", "full")),
        snr_grid_db=tuple(float(s) for s in data.get("snr_db", range(0, 21, 2))),
        trials=int(data.get("trials", 100)),
        min_trials=int(data.get("min_trials", 1)),
        min_bit_errors=int(data.get("min_bit_errors", 200)),
        seed=int(data.get("seed", 0)),
        constellation=data.get("mod", "qpsk"),
        ideal_channel=bool(data.get("ideal_channel", False)),
    )


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return scenario_from_json(json.load(fh))
