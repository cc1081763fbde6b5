"""Power-ratio sparsity metrics and per-column channel truncation operators.

lpr (localized power ratio): per column, the fraction of power inside a
circular window of 2*L_c + 1 entries centered on the column's peak, averaged
over all P columns. spr (sorted power ratio): the same with the 2*L_c + 1
largest-power entries per column, so spr >= lpr always. The matching
truncation operators zero everything outside the selected entries and feed
the reduced-complexity equalizers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import DomainMatrix


@dataclass(frozen=True)
class SparsityRecord:
    """One averaged sparsity measurement for a (case, domain, L_c) point."""

    domain: str
    case_id: int | None
    L_c: int
    lpr: float
    spr: float
    realizations: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.lpr <= self.spr <= 1.0 + 1e-12:
            raise ValueError(f"need 0 <= lpr <= spr <= 1, got {self.lpr}, {self.spr}")


def _check_window(P: int, L_c: int):
    if L_c < 0:
        raise ValueError("window half-width must be >= 0")
    if 2 * L_c + 1 > P:
        raise ValueError(f"window 2*{L_c}+1 exceeds matrix size {P}")


def _power(H: DomainMatrix) -> np.ndarray:
    return np.abs(H.entries) ** 2


def _column_ratios(window_power: np.ndarray, total_power: np.ndarray) -> np.ndarray:
    # zero-power columns count as fully captured rather than NaN
    safe = np.where(total_power > 0.0, total_power, 1.0)
    return np.where(total_power > 0.0, window_power / safe, 1.0)


def lpr_curve(H: DomainMatrix, lcs) -> np.ndarray:
    """Localized power ratio evaluated at every window half-width in `lcs`."""
    lcs = np.asarray(lcs, dtype=int)
    P = H.P
    for lc in lcs:
        _check_window(P, int(lc))
    a = _power(H)
    total = a.sum(axis=0)
    cols = np.arange(P)
    peaks = np.argmax(a, axis=0)  # first occurrence, so ties go to the smallest index

    max_lc = int(lcs.max()) if lcs.size else 0
    cum = np.empty((max_lc + 1, P))
    cum[0] = a[peaks, cols]
    if max_lc:
        offs = np.arange(1, max_lc + 1)[:, None]
        upper = a[(peaks[None, :] + offs) % P, cols[None, :]]
        lower = a[(peaks[None, :] - offs) % P, cols[None, :]]
        cum[1:] = np.cumsum(upper + lower, axis=0) + cum[0]
    return np.array([_column_ratios(cum[int(lc)], total).mean() for lc in lcs])


def spr_curve(H: DomainMatrix, lcs) -> np.ndarray:
    """Sorted power ratio evaluated at every window half-width in `lcs`."""
    lcs = np.asarray(lcs, dtype=int)
    P = H.P
    for lc in lcs:
        _check_window(P, int(lc))
    a = _power(H)
    total = a.sum(axis=0)
    ranked = np.sort(a, axis=0)[::-1]
    cum = np.cumsum(ranked, axis=0)
    return np.array(
        [_column_ratios(cum[2 * int(lc)], total).mean() for lc in lcs]
    )


def lpr(H: DomainMatrix, L_c: int) -> float:
    """Average power fraction in the circular peak-centered window per column."""
    return float(lpr_curve(H, [L_c])[0])


def spr(H: DomainMatrix, L_c: int) -> float:
    """Average power fraction of the 2*L_c + 1 largest entries per column."""
    return float(spr_curve(H, [L_c])[0])


def truncate_band(H: DomainMatrix, L_c: int) -> DomainMatrix:
    """Keep the circular window of 2*L_c + 1 entries around each column's peak."""
    _check_window(H.P, L_c)
    a = _power(H)
    P = H.P
    cols = np.arange(P)
    peaks = np.argmax(a, axis=0)
    rows = (peaks[None, :] + np.arange(-L_c, L_c + 1)[:, None]) % P
    out = np.zeros_like(H.entries)
    out[rows, cols[None, :]] = H.entries[rows, cols[None, :]]
    return DomainMatrix(H.domain, out, H.fact)


def truncate_topk(H: DomainMatrix, L_c: int) -> DomainMatrix:
    """Keep the 2*L_c + 1 largest-power entries of each column (ties by index)."""
    _check_window(H.P, L_c)
    a = _power(H)
    P = H.P
    cols = np.arange(P)
    order = np.argsort(-a, axis=0, kind="stable")
    rows = order[: 2 * L_c + 1]
    out = np.zeros_like(H.entries)
    out[rows, cols[None, :]] = H.entries[rows, cols[None, :]]
    return DomainMatrix(H.domain, out, H.fact)
