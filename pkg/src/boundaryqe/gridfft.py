"""Fourier helpers on uniform (possibly half-offset) periodic boundary grids.

Grid nodes are s_j = s0 + j * L/M; coefficients refer to the basis
exp(2 pi i m s / L) with integer frequencies in the symmetric range
(-M/2, M/2], the Nyquist slot carried at +M/2.
"""

from __future__ import annotations

import numpy as np


def grid_freqs(M: int) -> np.ndarray:
    """Integer frequencies in FFT layout, remapped to the range (-M/2, M/2]."""
    m = np.fft.fftfreq(M, d=1.0 / M).astype(int)
    if M % 2 == 0:
        m = m.copy()
        m[M // 2] = M // 2  # Nyquist at +M/2 by convention
    return m


def grid_coeffs(f: np.ndarray, s0: float, L: float) -> np.ndarray:
    """Fourier coefficients of samples f on the offset grid (FFT frequency order)."""
    M = f.size
    m = grid_freqs(M)
    return np.fft.fft(f) / M * np.exp(-2j * np.pi * m * s0 / L)


def grid_synthesize(coeffs: np.ndarray, s, L: float) -> np.ndarray:
    """Evaluate a coefficient vector at arbitrary arclengths s (dense synthesis)."""
    m = grid_freqs(coeffs.size)
    s = np.asarray(s, dtype=float)
    return np.exp(2j * np.pi * np.outer(s, m) / L) @ coeffs


def grid_values(coeffs: np.ndarray, s0: float, L: float) -> np.ndarray:
    """Inverse of grid_coeffs back onto the same offset grid."""
    M = coeffs.size
    m = grid_freqs(M)
    return np.fft.ifft(coeffs * M * np.exp(2j * np.pi * m * s0 / L))


def grid_derivative(f: np.ndarray, L: float, order: int = 1) -> np.ndarray:
    """Spectral d^order/ds^order on a uniform periodic grid (offset-independent)."""
    M = f.size
    m = grid_freqs(M).astype(float)
    if order % 2 == 1 and M % 2 == 0:
        m[M // 2] = 0.0  # odd derivative of the Nyquist mode is not representable
    mult = (2j * np.pi * m / L) ** order
    out = np.fft.ifft(np.fft.fft(f) * mult)
    return out.real if np.isrealobj(f) else out


def upsample(f: np.ndarray, factor: int) -> np.ndarray:
    """Trigonometric interpolation onto a factor-times finer grid with the
    same offset convention (node j of the fine grid sits at s0 + j*L/(fM))."""
    M = f.size
    Mf = factor * M
    fh = np.fft.fft(f)
    out = np.zeros(Mf, dtype=complex)
    n = M // 2
    out[:n] = fh[:n]
    out[-n + 1:] = fh[-n + 1:] if n > 1 else out[-n + 1:]
    if M % 2 == 0:
        out[n] = 0.5 * fh[n]
        out[-n] = 0.5 * fh[n]
    # fine grid starts at the same s0 only if the coarse offset is kept:
    # shift by the phase difference between coarse and fine node zero
    vals = np.fft.ifft(out) * factor
    return vals if np.iscomplexobj(f) else vals.real


def upsample_offset_preserving(f: np.ndarray, factor: int, s0_coarse: float,
                               s0_fine: float, L: float) -> np.ndarray:
    """Upsample where coarse and fine grids carry different offsets."""
    M = f.size
    coeffs = grid_coeffs(np.asarray(f, dtype=complex), s0_coarse, L)
    Mf = factor * M
    mf = grid_freqs(Mf)
    cf = np.zeros(Mf, dtype=complex)
    m = grid_freqs(M)
    n = M // 2
    for i, mm in enumerate(m):
        if abs(mm) == n and M % 2 == 0:
            cf[np.where(mf == n)[0][0]] += 0.5 * coeffs[i]
            cf[np.where(mf == -n)[0][0]] += 0.5 * coeffs[i]
        else:
            cf[np.where(mf == mm)[0][0]] = coeffs[i]
    return grid_values(cf, s0_fine, L)
