"""Unitary DFTs, Kronecker-structured row transforms, and the layered IDFT.

All transforms here use the unitary (1/sqrt(size)) scaling so that every map
between signal domains is orthonormal and norm preservation is a testable
invariant. The layered IDFT splits a P = M*N point IDFT into a column-wise
M-point IDFT, an element-wise phase weighting, and a row-wise N-point IDFT;
the row-only transform (the delay-Doppler modulator) is the Kronecker map
conj(F_N) (x) I_M acting on column-vectorized M x N grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class LayeredFactorization:
    """Split of a P-point transform over an M x N grid, P = M * N.

    M is the column (delay-axis) size, N the row (Doppler-axis) size.
    """

    P: int
    M: int
    N: int

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError(f"grid sizes must be >= 1, got M={self.M}, N={self.N}")
        if self.P != self.M * self.N:
            raise ValueError(f"P must equal M*N: P={self.P}, M*N={self.M * self.N}")

    @classmethod
    def from_mn(cls, M: int, N: int) -> "LayeredFactorization":
        return cls(M * N, M, N)


@dataclass(frozen=True)
class TwiddleMatrix:
    """Phase-weight matrix of the layered IDFT: entry (m, n) = exp(-2j*pi*m*n/P)."""

    M: int
    N: int
    entries: np.ndarray

    @classmethod
    def for_factorization(cls, fact: LayeredFactorization) -> "TwiddleMatrix":
        return cls(fact.M, fact.N, _twiddle(fact.M, fact.N).copy())


@lru_cache(maxsize=32)
def _twiddle(M: int, N: int) -> np.ndarray:
    # exp(-2j*pi*m*n/(M*N)); cached, treated as read-only
    m = np.arange(M)[:, None]
    n = np.arange(N)[None, :]
    w = np.exp(-2j * np.pi * m * n / (M * N))
    w.flags.writeable = False
    return w


def unitary_dft(v: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Unitary P-point DFT of a vector; `inverse` selects the +j exponent.

    Forward: out[p] = (1/sqrt(P)) * sum_k v[k] * exp(-2j*pi*k*p/P).
    Applying forward then inverse returns the input; the 2-norm is preserved.
    """
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("expected a non-empty 1-D vector")
    P = v.shape[0]
    if inverse:
        return np.fft.ifft(v) * np.sqrt(P)
    return np.fft.fft(v) / np.sqrt(P)


def _check_len(v: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != fact.P:
        raise ValueError(f"vector length {v.shape} does not match P={fact.P}")
    return v


def kron_idft_rows(v: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    """Row-wise N-point unitary IDFT on the column-filled M x N grid of `v`.

    Equals (conj(F_N) (x) I_M) @ v for unitary F_N: reshape `v` column-wise
    into an M x N array, IDFT each length-N row, re-vectorize column-wise.
    This is the delay-Doppler -> time map of the layered structure.
    """
    v = _check_len(v, fact)
    grid = v.reshape((fact.M, fact.N), order="F")
    out = np.fft.ifft(grid, axis=1) * np.sqrt(fact.N)
    return out.reshape(fact.P, order="F")


def kron_dft_rows(v: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    """Adjoint (and inverse) of :func:`kron_idft_rows`: time -> delay-Doppler."""
    v = _check_len(v, fact)
    grid = v.reshape((fact.M, fact.N), order="F")
    out = np.fft.fft(grid, axis=1) / np.sqrt(fact.N)
    return out.reshape(fact.P, order="F")


def layered_idft(v: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    """Three-stage unitary P-point IDFT over the M x N split of `fact`.

    Stage 1: fill an M x N array row-wise (row a holds v[N*a : N*a + N]) and
    apply a unitary M-point IDFT to each column. Stage 2: multiply entry
    (m, b) by exp(+2j*pi*m*b/P), the conjugate of the twiddle matrix. Stage 3:
    apply a unitary N-point IDFT to each row and vectorize column-wise.

    The composition equals ``unitary_dft(v, inverse=True)`` to numerical
    tolerance for every factorization of P.
    """
    v = _check_len(v, fact)
    grid = v.reshape((fact.M, fact.N), order="C")
    stage1 = np.fft.ifft(grid, axis=0) * np.sqrt(fact.M)
    stage2 = stage1 * np.conj(_twiddle(fact.M, fact.N))
    stage3 = np.fft.ifft(stage2, axis=1) * np.sqrt(fact.N)
    return stage3.reshape(fact.P, order="F")


def otfs_precoder(s: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    """Frequency-domain precoder that cancels stages 1-2 of the layered IDFT.

    Maps delay-Doppler symbols to the frequency vector whose layered IDFT
    equals ``kron_idft_rows(s)``: undo the phase weighting (multiply by the
    twiddle matrix itself) and apply a column-wise unitary M-point DFT, then
    read the grid out row-wise.
    """
    s = _check_len(s, fact)
    grid = s.reshape((fact.M, fact.N), order="F")
    weighted = grid * _twiddle(fact.M, fact.N)
    freq = np.fft.fft(weighted, axis=0) / np.sqrt(fact.M)
    return freq.reshape(fact.P, order="C")
