"""Tagged containers for channel matrices and signal vectors.

Matrix domains: dt (delay-time), ft (frequency-time), fD (frequency-Doppler),
dD_otfs (delay-Doppler in the M x N grid sense), dD_direct (two-sided inverse
DFT of fD, kept only as a negative example). Signal domains: time, freq, dd.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import LayeredFactorization

DT = "dt"
FT = "ft"
FD = "fD"
DD_OTFS = "dD_otfs"
DD_DIRECT = "dD_direct"
MATRIX_DOMAINS = (DT, FT, FD, DD_OTFS, DD_DIRECT)

TIME = "time"
FREQ = "freq"
DD = "dd"
SIGNAL_DOMAINS = (TIME, FREQ, DD)


@dataclass(frozen=True)
class DomainMatrix:
    """A P x P channel matrix tagged with the domain it lives in."""

    domain: str
    entries: np.ndarray
    fact: LayeredFactorization | None = None

    def __post_init__(self):
        if self.domain not in MATRIX_DOMAINS:
            raise ValueError(f"unknown matrix domain {self.domain!r}")
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"channel matrix must be square, got shape {e.shape}")
        if self.domain == DD_OTFS:
            if self.fact is None:
                raise ValueError("dD_otfs matrices require a LayeredFactorization")
            if self.fact.P != e.shape[0]:
                raise ValueError(
                    f"factorization P={self.fact.P} does not match matrix size {e.shape[0]}"
                )

    @property
    def P(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SymbolFrame:
    """A length-P signal vector tagged with its domain (time / freq / dd)."""

    domain: str
    values: np.ndarray

    def __post_init__(self):
        if self.domain not in SIGNAL_DOMAINS:
            raise ValueError(f"unknown signal domain {self.domain!r}")
        if np.asarray(self.values).ndim != 1:
            raise ValueError("frame values must be a 1-D vector")

    @property
    def P(self) -> int:
        return len(self.values)
