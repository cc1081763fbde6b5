"""Random doubly selective channels and the delay-time channel matrix.

A channel realization is a set of L paths with complex gains, fractional
delays (in sample units) and fractional Dopplers (in Doppler-bin units).
Gains follow a Rician model: one deterministic line-of-sight component on
path 1 plus equal-power complex Gaussian scatter on every path, renormalized
to unit total power so that SNR = 1 / noise_variance. The delay-time matrix
entry is

    H[m, n] = sum_l gain_l * dirichlet((m - n - delay_l) mod P, P)
                     * exp(2j*pi*m*doppler_l/P)

with rectangular windowing/filtering, i.e. the fractional-delay kernel is the
Dirichlet kernel (the periodic counterpart of the sinc).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .frames import DT, DomainMatrix

# readings of the Doppler figure F_d: total spread width (default), maximum
# absolute shift, or one-directional maximum
SPREAD = "spread"
TWO_SIDED = "two-sided"
ONE_SIDED = "one-sided"
DOPPLER_RANGES = (SPREAD, TWO_SIDED, ONE_SIDED)

# case id -> (path count, max delay spread [samples], max Doppler [bins], Rician factor [dB])
CASE_TABLE = {
    1: (2, 5.0, 2.0, 10.0),
    2: (2, 8.0, 0.5, 5.0),
    3: (8, 16.0, 0.1, 6.0),
    4: (8, 24.0, 0.2, 2.0),
}


@dataclass(frozen=True)
class ChannelCaseConfig:
    """Scenario parameters: path count, spreads, Rician factor, frame sizes."""

    case_id: int | None
    L: int
    T_d: float
    F_d: float
    R_f: float
    P: int
    M: int
    N: int
    doppler_range: str = SPREAD

    def __post_init__(self):
        if self.P != self.M * self.N:
            raise ValueError(f"P must equal M*N: P={self.P}, M*N={self.M * self.N}")
        if self.L < 1:
            raise ValueError("path count must be >= 1")
        if not 0 <= self.T_d < self.P:
            raise ValueError(f"delay spread must satisfy 0 <= T_d < P, got {self.T_d}")
        if self.F_d < 0:
            raise ValueError("Doppler spread must be >= 0")
        if not np.isfinite(self.R_f):
            raise ValueError("Rician factor must be finite")
        if self.doppler_range not in DOPPLER_RANGES:
            raise ValueError(f"unknown doppler_range {self.doppler_range!r}")


@dataclass(frozen=True)
class Path:
    gain: complex
    delay: float
    doppler: float


@dataclass(frozen=True)
class PathSet:
    """A realized channel: L paths plus the seed that produced them."""

    paths: tuple[Path, ...]
    seed: int
    case_id: int | None = None

    def __post_init__(self):
        if not self.paths:
            raise ValueError("a PathSet needs at least one path")
        power = sum(abs(p.gain) ** 2 for p in self.paths)
        if abs(power - 1.0) > 1e-6:
            raise ValueError(f"path gains must have unit total power, got {power}")

    @property
    def gains(self) -> np.ndarray:
        return np.array([p.gain for p in self.paths], dtype=complex)

    @property
    def delays(self) -> np.ndarray:
        return np.array([p.delay for p in self.paths], dtype=float)

    @property
    def dopplers(self) -> np.ndarray:
        return np.array([p.doppler for p in self.paths], dtype=float)

    def to_record(self) -> dict:
        return {
            "seed": self.seed,
            "case": self.case_id,
            "paths": [
                {"re": p.gain.real, "im": p.gain.imag, "delay": p.delay, "doppler": p.doppler}
                for p in self.paths
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_record(cls, rec: dict) -> "PathSet":
        paths = tuple(
            Path(complex(p["re"], p["im"]), float(p["delay"]), float(p["doppler"]))
            for p in rec["paths"]
        )
        return cls(paths=paths, seed=int(rec["seed"]), case_id=rec.get("case"))

    @classmethod
    def from_json(cls, text: str) -> "PathSet":
        return cls.from_record(json.loads(text))


def case_config(
    case_id: int,
    P: int,
    M: int,
    N: int | None = None,
    doppler_range: str = SPREAD,
) -> ChannelCaseConfig:
    """Look up one of the four tabulated channel cases at the given frame sizes."""
    if case_id not in CASE_TABLE:
        raise ValueError(f"unknown channel case {case_id!r}; known cases: 1..4")
    if N is None:
        if P % M:
            raise ValueError(f"M={M} does not divide P={P}")
        N = P // M
    L, t_d, f_d, r_f = CASE_TABLE[case_id]
    return ChannelCaseConfig(
        case_id=case_id, L=L, T_d=t_d, F_d=f_d, R_f=r_f, P=P, M=M, N=N,
        doppler_range=doppler_range,
    )


def sample_paths(cfg: ChannelCaseConfig, seed: int) -> PathSet:
    """Draw one channel realization; deterministic given (cfg, seed).

    Delays are i.i.d. uniform on [0, T_d]. Dopplers are uniform on
    [-F_d/2, F_d/2] by default (F_d read as the total spread width, like
    T_d); the two-sided [-F_d, F_d] and one-sided [0, F_d] readings are
    selectable on the config. With K the linear
    Rician factor, path 1 carries a deterministic amplitude sqrt(K/(K+1))
    and every path an independent complex Gaussian scatter term of power
    1/((K+1)*L); the gain vector is renormalized to unit power.

    Draw order is fixed (delays, Dopplers, scatter) so that identical seeds
    give bit-identical path sets.
    """
    rng = np.random.default_rng(seed)
    delays = rng.uniform(0.0, cfg.T_d, cfg.L)
    if cfg.doppler_range == SPREAD:
        lo, hi = -cfg.F_d / 2.0, cfg.F_d / 2.0
    elif cfg.doppler_range == TWO_SIDED:
        lo, hi = -cfg.F_d, cfg.F_d
    else:
        lo, hi = 0.0, cfg.F_d
    dopplers = rng.uniform(lo, hi, cfg.L)

    k = 10.0 ** (cfg.R_f / 10.0)
    noise = rng.standard_normal((cfg.L, 2))
    gains = (noise[:, 0] + 1j * noise[:, 1]) * np.sqrt(1.0 / (2.0 * (k + 1.0) * cfg.L))
    gains[0] += np.sqrt(k / (k + 1.0))
    gains /= np.linalg.norm(gains)

    paths = tuple(
        Path(complex(gains[i]), float(delays[i]), float(dopplers[i])) for i in range(cfg.L)
    )
    return PathSet(paths=paths, seed=int(seed), case_id=cfg.case_id)


def dirichlet(x, P: int):
    """Dirichlet kernel (1/P) * sum_{p=0}^{P-1} exp(2j*pi*p*x/P).

    Evaluated in closed form as
    exp(1j*pi*x*(P-1)/P) * sin(pi*x) / (P * sin(pi*x/P)), with the removable
    singularity at x = 0 (mod P) taking the value 1. Exactly P-periodic;
    vanishes at all other integers, which is what collapses on-grid delays
    to circular shifts.
    """
    if P < 1:
        raise ValueError("P must be >= 1")
    x = np.asarray(x, dtype=float)
    # exact periodicity lets us center the argument, which keeps both sines
    # accurate near the removable singularity
    r = np.mod(x, P)
    r = np.where(r > P / 2, r - P, r)
    # denormal-scale offsets would overflow the complex division; the kernel
    # is 1 + O(r) there anyway
    singular = np.abs(r) < 1e-300
    safe = np.where(singular, 1.0, r)
    out = (
        np.exp(1j * np.pi * safe * (P - 1) / P)
        * np.sin(np.pi * safe)
        / (P * np.sin(np.pi * safe / P))
    )
    out = np.where(singular, 1.0 + 0.0j, out)
    return complex(out) if out.ndim == 0 else out


@lru_cache(maxsize=4)
def _shift_index(P: int) -> np.ndarray:
    # (m - n) mod P lookup table shared by the circulant-style builders
    k = np.arange(P)
    idx = (k[:, None] - k[None, :]) % P
    idx.flags.writeable = False
    return idx


def build_H_dt(paths: PathSet, P: int) -> DomainMatrix:
    """Delay-time channel matrix of a path set.

    H[m, n] = sum_l gain_l * dirichlet((m - n - delay_l) mod P, P)
                     * exp(2j*pi*m*doppler_l/P).

    Zero-Doppler channels give a circulant matrix; on-grid delays collapse
    the Dirichlet kernel to a Kronecker delta (circular shifts).
    """
    delays = paths.delays
    if np.any(delays >= P):
        raise ValueError("path delays must be smaller than the frame length")
    gains = paths.gains
    dopplers = paths.dopplers

    m = np.arange(P)
    # rank-L split: T[m, k] = sum_l (g_l * phase_l[m]) * kernel_l[k], k = (m-n) mod P
    phases = np.exp(2j * np.pi * np.outer(m, dopplers) / P)
    kernels = dirichlet(m[None, :] - delays[:, None], P)
    t = (phases * gains[None, :]) @ kernels
    h = np.take_along_axis(t, _shift_index(P), axis=1)
    return DomainMatrix(DT, h)
