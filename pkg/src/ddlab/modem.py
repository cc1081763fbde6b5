"""Bit <-> symbol mapping and the SC/OFDM/OTFS modulation pipelines.

A modulation scheme is just a domain placement of data symbols: SC puts them
in the time domain, OFDM in the frequency domain (transmitted through a
unitary IDFT), OTFS in the delay-Doppler domain (transmitted through the
row-IDFT Kronecker map). All three modulators are unitary. No cyclic-prefix
samples are simulated; the circular channel model already assumes one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .frames import DD, FREQ, TIME, SymbolFrame
from .spectral import LayeredFactorization, kron_idft_rows, unitary_dft


class Scheme(enum.Enum):
    SC = "sc"
    OFDM = "ofdm"
    OTFS = "otfs"

    @property
    def data_domain(self) -> str:
        return {Scheme.SC: TIME, Scheme.OFDM: FREQ, Scheme.OTFS: DD}[self]


@dataclass(frozen=True)
class Constellation:
    """Unit-average-power constellation with Gray labels as point indexes."""

    name: str
    points: np.ndarray
    bits_per_symbol: int


def _qpsk() -> Constellation:
    # Gray convention: bit 0 selects the real sign, bit 1 the imaginary sign;
    # label 0b00 -> (1+1j)/sqrt(2)
    pts = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=complex) / np.sqrt(2)
    return Constellation("qpsk", pts, 2)


def _qam16() -> Constellation:
    # per-axis 2-bit Gray code: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
    levels = {0b00: -3.0, 0b01: -1.0, 0b11: 1.0, 0b10: 3.0}
    pts = np.empty(16, dtype=complex)
    for label in range(16):
        i = levels[(label >> 2) & 0b11]
        q = levels[label & 0b11]
        pts[label] = (i + 1j * q) / np.sqrt(10.0)
    return Constellation("16qam", pts, 4)


_CONSTELLATIONS = {"qpsk": _qpsk, "16qam": _qam16}


def constellation(name: str) -> Constellation:
    try:
        return _CONSTELLATIONS[name]()
    except KeyError:
        raise ValueError(
            f"unknown constellation {name!r}; choose from {sorted(_CONSTELLATIONS)}"
        ) from None


def map_bits(bits, c: Constellation) -> np.ndarray:
    """Gray-map a bit vector (MSB first per symbol) to constellation points."""
    bits = np.asarray(bits, dtype=int)
    if bits.ndim != 1 or bits.size % c.bits_per_symbol:
        raise ValueError(
            f"bit count {bits.size} is not a multiple of {c.bits_per_symbol}"
        )
    groups = bits.reshape(-1, c.bits_per_symbol)
    weights = 1 << np.arange(c.bits_per_symbol - 1, -1, -1)
    labels = groups @ weights
    return c.points[labels]


def hard_demap(symbols, c: Constellation) -> np.ndarray:
    """Nearest-point decisions; ties resolve toward the lower label."""
    symbols = np.asarray(symbols, dtype=complex)
    d2 = np.abs(symbols[:, None] - c.points[None, :]) ** 2
    labels = np.argmin(d2, axis=1)
    shifts = np.arange(c.bits_per_symbol - 1, -1, -1)
    bits = (labels[:, None] >> shifts[None, :]) & 1
    return bits.reshape(-1)


def modulate(
    scheme: Scheme, s: np.ndarray, fact: LayeredFactorization | None = None
) -> SymbolFrame:
    """Place data symbols in the scheme's domain and emit the time signal.

    SC transmits the symbols directly, OFDM applies the unitary P-point IDFT,
    OTFS applies the row-IDFT Kronecker map (needs `fact`).
    """
    s = np.asarray(s, dtype=complex)
    if s.ndim != 1:
        raise ValueError("symbol vector must be 1-D")
    if scheme == Scheme.SC:
        out = s.copy()
    elif scheme == Scheme.OFDM:
        out = unitary_dft(s, inverse=True)
    elif scheme == Scheme.OTFS:
        if fact is None:
            raise ValueError("OTFS modulation needs a LayeredFactorization")
        out = kron_idft_rows(s, fact)
    else:  # pragma: no cover
        raise ValueError(f"unknown scheme {scheme!r}")
    return SymbolFrame(TIME, out)
