"""Exact unitary maps between channel-matrix domains and signal-frame domains.

All inter-domain matrix maps are computed by unitary conjugation of the
delay-time matrix; the frequency-Doppler closed form exists only as an
independent analytic cross-check. With F the unitary P-point DFT and
K = conj(F_N) (x) I_M the row-IDFT Kronecker map:

    ft       = F @ dt
    fD       = F @ dt @ F^H
    dD_otfs  = K^H @ dt @ K
    dD_direct = F^H @ fD @ F
"""

from __future__ import annotations

import numpy as np

from .channel import PathSet, _shift_index, build_H_dt, dirichlet
from .frames import (
    DD,
    DD_DIRECT,
    DD_OTFS,
    DT,
    FD,
    FREQ,
    FT,
    TIME,
    DomainMatrix,
    SymbolFrame,
)
from .spectral import LayeredFactorization, kron_dft_rows, kron_idft_rows, unitary_dft


def _require_domain(H: DomainMatrix, domain: str):
    if H.domain != domain:
        raise ValueError(f"expected a {domain}-domain matrix, got {H.domain}")


def to_ft(H: DomainMatrix) -> DomainMatrix:
    """Frequency-time matrix: unitary DFT applied to every column of H_dt."""
    _require_domain(H, DT)
    out = np.fft.fft(H.entries, axis=0) / np.sqrt(H.P)
    return DomainMatrix(FT, out, H.fact)


def to_fD(H: DomainMatrix) -> DomainMatrix:
    """Frequency-Doppler matrix F @ H_dt @ F^H (two-sided unitary DFT)."""
    _require_domain(H, DT)
    # fft/sqrt(P) on columns then ifft*sqrt(P) on rows; the scalings cancel
    out = np.fft.ifft(np.fft.fft(H.entries, axis=0), axis=1)
    return DomainMatrix(FD, out, H.fact)


def fD_closed_form(paths: PathSet, P: int) -> DomainMatrix:
    """Analytic frequency-Doppler matrix, used only to cross-check `to_fD`.

    (H_fD)[m, n] = sum_l gain_l * conj(dirichlet((m - n - doppler_l) mod P, P))
                          * exp(-2j*pi*n*delay_l/P)

    The Doppler kernel carries the conjugate (negative-exponent) Dirichlet
    phase: that convention is forced by requiring entrywise agreement with
    F @ H_dt @ F^H. With the positive-exponent kernel the result differs by
    the separable phase field exp(-2j*pi*(m - n - doppler)*(P-1)/P).
    """
    gains = paths.gains
    delays = paths.delays
    dopplers = paths.dopplers

    n = np.arange(P)
    # rank-L split over k = (m - n) mod P: T[k, n] = sum_l g_l kernel_l[k] phase_l[n]
    kernels = np.conj(dirichlet(n[:, None] - dopplers[None, :], P))
    phases = np.exp(-2j * np.pi * np.outer(delays, n) / P)
    t = (kernels * gains[None, :]) @ phases
    h = np.take_along_axis(t, _shift_index(P), axis=0)
    return DomainMatrix(FD, h)


def _doppler_dft_rows(mat: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    # left-multiply by F_N (x) I_M: forward DFT along the Doppler axis of the rows
    g = mat.reshape(fact.N, fact.M, mat.shape[1])
    g = np.fft.fft(g, axis=0) / np.sqrt(fact.N)
    return g.reshape(mat.shape)


def _doppler_idft_cols(mat: np.ndarray, fact: LayeredFactorization) -> np.ndarray:
    # right-multiply by conj(F_N) (x) I_M: inverse DFT along the Doppler axis of the columns
    g = mat.reshape(mat.shape[0], fact.N, fact.M)
    g = np.fft.ifft(g, axis=1) * np.sqrt(fact.N)
    return g.reshape(mat.shape)


def to_dD_otfs(H: DomainMatrix, fact: LayeredFactorization) -> DomainMatrix:
    """Delay-Doppler matrix (F_N (x) I_M) @ H_dt @ (conj(F_N) (x) I_M).

    The right factor is exactly the matrix realized by
    :func:`ddlab.spectral.kron_idft_rows`; doubly selective channels show the
    stripe structure (nonzero diagonals spaced at M) in this domain.
    """
    _require_domain(H, DT)
    if fact.P != H.P:
        raise ValueError(f"factorization P={fact.P} does not match matrix size {H.P}")
    out = _doppler_idft_cols(_doppler_dft_rows(H.entries, fact), fact)
    return DomainMatrix(DD_OTFS, out, fact)


def to_dD_direct(H: DomainMatrix) -> DomainMatrix:
    """Two-sided inverse-DFT conjugation of the fD matrix (non-sparse domain)."""
    _require_domain(H, FD)
    out = np.fft.ifft(np.fft.fft(H.entries, axis=1), axis=0)
    return DomainMatrix(DD_DIRECT, out, H.fact)


def convert_frame(
    frame: SymbolFrame, target: str, fact: LayeredFactorization | None = None
) -> SymbolFrame:
    """Move a signal vector between the time, freq, and dd domains.

    time <-> freq is the unitary P-point DFT pair (freq -> time is the IDFT);
    time <-> dd is the row-IDFT Kronecker map and its adjoint. Conversions
    through a third domain compose the two, so all round trips are identity.
    """
    if target not in (TIME, FREQ, DD):
        raise ValueError(f"unknown signal domain {target!r}")
    if frame.domain == target:
        return frame
    if (frame.domain == DD or target == DD) and fact is None:
        raise ValueError("delay-Doppler conversions need a LayeredFactorization")

    v = np.asarray(frame.values)
    if frame.domain == TIME:
        t = v
    elif frame.domain == FREQ:
        t = unitary_dft(v, inverse=True)
    else:
        t = kron_idft_rows(v, fact)

    if target == TIME:
        out = t
    elif target == FREQ:
        out = unitary_dft(t)
    else:
        out = kron_dft_rows(t, fact)
    return SymbolFrame(target, out)


def impulse_pattern(
    paths: PathSet,
    input_domain: str,
    probe_index: int,
    fact: LayeredFactorization,
    observe_domain: str | None = None,
) -> np.ndarray:
    """Received magnitudes for a single unit symbol sent in one domain.

    Transmits a frame that is 1 at `probe_index` in `input_domain` and 0
    elsewhere, passes it through the delay-time channel noiselessly, converts
    the received time vector to `observe_domain` (default: the input domain),
    reshapes it column-wise into an M x N array and returns entry magnitudes.
    """
    if not 0 <= probe_index < fact.P:
        raise ValueError(f"probe index {probe_index} out of range for P={fact.P}")
    probe = np.zeros(fact.P, dtype=complex)
    probe[probe_index] = 1.0
    x_t = convert_frame(SymbolFrame(input_domain, probe), TIME, fact)
    H = build_H_dt(paths, fact.P)
    y_t = H.entries @ x_t.values
    obs = convert_frame(SymbolFrame(TIME, y_t), observe_domain or input_domain, fact)
    return np.abs(obs.values.reshape((fact.M, fact.N), order="F"))
