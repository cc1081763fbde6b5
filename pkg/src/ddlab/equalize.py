"""Linear MMSE/ZF equalization in a chosen domain plus the domain recommender.

The equalizer works on the full channel matrix or on a per-column truncation
of it (band window around each column's peak, or top-k entries). Estimates
are always returned in the scheme's data domain so bit-error accounting is
uniform across SC, OFDM, and OTFS. With white unit-power symbol priors the
full-channel MMSE estimate is invariant to the equalization domain; only
truncation makes the domains differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelCaseConfig
from .domains import convert_frame, to_dD_otfs, to_fD
from .frames import DD, DD_OTFS, DT, FD, FREQ, TIME, DomainMatrix, SymbolFrame
from .modem import Scheme
from .sparsity import lpr, truncate_band, truncate_topk
from .spectral import LayeredFactorization


class SingularChannelError(ValueError):
    """Zero-forcing solve attempted on a numerically singular channel."""


@dataclass(frozen=True)
class ChannelMode:
    """Channel knowledge handed to the equalizer: full or truncated."""

    kind: str = "full"  # full | band | topk
    L_c: int | None = None

    def __post_init__(self):
        if self.kind not in ("full", "band", "topk"):
            raise ValueError(f"unknown channel mode {self.kind!r}")
        if self.kind != "full" and (self.L_c is None or self.L_c < 0):
            raise ValueError("truncated channel modes need a window half-width L_c")

    @classmethod
    def parse(cls, text: str) -> "ChannelMode":
        if text == "full":
            return cls()
        kind, sep, num = text.partition(":")
        if sep and kind in ("band", "topk"):
            return cls(kind, int(num))
        raise ValueError(f"cannot parse channel mode {text!r} (full|band:L|topk:L)")

    def __str__(self) -> str:
        return self.kind if self.kind == "full" else f"{self.kind}:{self.L_c}"


@dataclass(frozen=True)
class EqualizerSpec:
    method: str  # mmse | zf
    eq_domain: str  # dt | fD | dD_otfs
    channel_mode: ChannelMode = ChannelMode()
    noise_variance: float = 0.0

    def __post_init__(self):
        if self.method not in ("mmse", "zf"):
            raise ValueError(f"unknown equalizer method {self.method!r}")
        if self.eq_domain not in (DT, FD, DD_OTFS):
            raise ValueError(f"unsupported equalization domain {self.eq_domain!r}")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be >= 0")


def mmse_solve(H: np.ndarray, y: np.ndarray, noise_variance: float) -> np.ndarray:
    """Solve (H^H H + noise_variance I) x = H^H y with a dense linear solve.

    Assumes unit-power white symbol priors. With noise_variance = 0 this is
    the zero-forcing solution and requires a numerically invertible channel;
    a singular system raises :class:`SingularChannelError`.
    """
    H = np.asarray(H, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    hh = H.conj().T
    gram = hh @ H
    if noise_variance:
        gram = gram + noise_variance * np.eye(H.shape[1])
    rhs = hh @ y
    try:
        x = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularChannelError(f"channel solve failed: {exc}") from exc
    if noise_variance == 0.0:
        scale = np.linalg.norm(rhs)
        residual = np.linalg.norm(gram @ x - rhs)
        if not np.all(np.isfinite(x)) or (scale > 0 and residual / scale > 1e-6):
            raise SingularChannelError("channel is numerically singular at zero noise")
    return x


_EQ_SIGNAL_DOMAIN = {DT: TIME, FD: FREQ, DD_OTFS: DD}
_SCHEME_EQ_DOMAINS = {
    Scheme.SC: (DT,),
    Scheme.OFDM: (FD,),
    Scheme.OTFS: (DT, FD, DD_OTFS),
}


def equalize(
    scheme: Scheme,
    spec: EqualizerSpec,
    H_dt: DomainMatrix,
    y_t: SymbolFrame,
    fact: LayeredFactorization,
) -> np.ndarray:
    """Equalize a received time frame; returns symbol estimates in the
    scheme's data domain.

    Pipeline: build the equalization-domain channel matrix from the
    delay-time one, apply the channel-mode truncation there, convert the
    received vector into that domain, run the linear solve, and convert the
    estimate to the scheme's data domain.
    """
    if spec.eq_domain not in _SCHEME_EQ_DOMAINS[scheme]:
        raise ValueError(
            f"{scheme.value} cannot be equalized in the {spec.eq_domain} domain"
        )
    if H_dt.domain != DT:
        raise ValueError("equalize expects the delay-time channel matrix")
    if y_t.domain != TIME:
        raise ValueError("equalize expects a time-domain received frame")

    if spec.eq_domain == DT:
        H_eq = H_dt
    elif spec.eq_domain == FD:
        H_eq = to_fD(H_dt)
    else:
        H_eq = to_dD_otfs(H_dt, fact)

    mode = spec.channel_mode
    if mode.kind == "band":
        H_eq = truncate_band(H_eq, mode.L_c)
    elif mode.kind == "topk":
        H_eq = truncate_topk(H_eq, mode.L_c)

    sig_domain = _EQ_SIGNAL_DOMAIN[spec.eq_domain]
    y_eq = convert_frame(y_t, sig_domain, fact)
    noise_variance = 0.0 if spec.method == "zf" else spec.noise_variance
    x_eq = mmse_solve(H_eq.entries, y_eq.values, noise_variance)
    est = convert_frame(SymbolFrame(sig_domain, x_eq), scheme.data_domain, fact)
    return est.values


@dataclass(frozen=True)
class RecommenderThresholds:
    """Tunable cutoffs for the rule-based recommender (no canonical values)."""

    small_delay: float = 8.0  # samples; at or below this, time-domain wins
    small_doppler: float = 0.5  # Doppler bins; at or below, frequency-Doppler wins
    dd_lpr: float = 0.9  # delay-Doppler LPR needed to pick that domain


@dataclass(frozen=True)
class DomainRecommendation:
    domain: str
    rule_fired: str
    metrics: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.domain not in (DT, FD, DD_OTFS):
            raise ValueError(f"recommendation must be dt/fD/dD_otfs, got {self.domain}")


def recommend_domain(
    cfg: ChannelCaseConfig | None = None,
    H_dt: DomainMatrix | None = None,
    mode: str = "rule",
    L_c: int | None = None,
    thresholds: RecommenderThresholds = RecommenderThresholds(),
) -> DomainRecommendation:
    """Pick an equalization domain, by rules on the config or by LPR argmax.

    Rule mode walks: small delay spread -> dt; otherwise small Doppler ->
    fD; otherwise a sparse delay-Doppler matrix (LPR >= threshold) -> dD;
    otherwise fD as the fallback. The third rule and metric mode need a
    channel realization and a window half-width.
    """
    if mode == "rule":
        if cfg is None:
            raise ValueError("rule mode needs a ChannelCaseConfig")
        if cfg.T_d <= thresholds.small_delay:
            return DomainRecommendation(DT, "small-delay-spread")
        if cfg.F_d <= thresholds.small_doppler:
            return DomainRecommendation(FD, "small-doppler")
        if H_dt is None or L_c is None:
            raise ValueError(
                "rule mode needs a channel realization and L_c once both spreads are large"
            )
        fact = LayeredFactorization(cfg.P, cfg.M, cfg.N)
        dd_lpr = lpr(to_dD_otfs(H_dt, fact), L_c)
        metrics = {DD_OTFS: dd_lpr}
        if dd_lpr >= thresholds.dd_lpr:
            return DomainRecommendation(DD_OTFS, "dd-sparse", metrics)
        return DomainRecommendation(FD, "fallback", metrics)

    if mode == "metric":
        if H_dt is None or L_c is None:
            raise ValueError("metric mode needs a channel realization and L_c")
        if H_dt.fact is not None:
            fact = H_dt.fact
        elif cfg is not None:
            fact = LayeredFactorization(cfg.P, cfg.M, cfg.N)
        else:
            raise ValueError("metric mode needs a factorization (via cfg or H_dt.fact)")
        metrics = {
            DT: lpr(H_dt, L_c),
            FD: lpr(to_fD(H_dt), L_c),
            DD_OTFS: lpr(to_dD_otfs(H_dt, fact), L_c),
        }
        best = max(metrics.values())
        domain = FD if metrics[FD] == best else max(metrics, key=metrics.get)
        return DomainRecommendation(domain, "metric-argmax", metrics)

    raise ValueError(f"unknown recommender mode {mode!r}")
