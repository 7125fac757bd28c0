"""First-kind Bessel functions and their zeros, self-contained.

Evaluation uses Miller's downward recurrence with sum normalization, which
stays accurate (~1e-14 relative) across the mixed regime x ~ m where neither
the ascending series nor the large-argument expansion reaches zero-finding
accuracy in double precision.  Zeros are located by a sign-change scan seeded
and cross-checked by McMahon's expansion, then polished with Newton steps.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .errors import IndexingError

_RESCALE = 1e250
_TINY = 1e-255


def _miller_start(m_max, x_max):
    t = max(m_max, x_max)
    return int(t + 18 + 2.2 * math.sqrt(t + 1)) | 1  # odd, so start+1 is even


def bessel_j_ladder(m_max: int, x) -> np.ndarray:
    """J_0(x) .. J_{m_max}(x) for scalar or 1-d array x >= 0.

    Returns shape (m_max+1,) for scalar x, else (m_max+1, len(x)).
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if (x < 0).any():
        raise ValueError("x >= 0 required")
    out = np.zeros((m_max + 1, x.size))
    nz = x > 0
    out[0, ~nz] = 1.0
    if nz.any():
        xs = x[nz]
        start = _miller_start(m_max, float(xs.max()))
        jp = np.zeros(xs.size)            # J_{k+1}
        jc = np.full(xs.size, _TINY)      # J_k
        norm = np.zeros(xs.size)
        keep = np.zeros((m_max + 1, xs.size))
        for k in range(start, 0, -1):
            jm = (2.0 * k / xs) * jc - jp
            jp, jc = jc, jm
            if k - 1 <= m_max:
                keep[k - 1] = jc
            if (k - 1) % 2 == 0 and k - 1 > 0:
                norm += jc
            big = np.abs(jc) > _RESCALE
            if big.any():
                scale = np.where(big, 1.0 / _RESCALE, 1.0)
                jc = jc * scale
                jp = jp * scale
                norm = norm * scale
                keep[:, big] *= 1.0 / _RESCALE
        norm = 2.0 * norm + jc  # J_0 + 2*(J_2 + J_4 + ...)
        out[:, nz] = keep / norm
    return out[:, 0] if scalar else out


def bessel_jn(m: int, x):
    """J_m(x), vectorized in x."""
    lad = bessel_j_ladder(m, x)
    return lad[m] if np.ndim(lad) >= 1 else lad


def bessel_jn_prime(m: int, x):
    """J_m'(x), vectorized in x."""
    lad = bessel_j_ladder(m + 1, x)
    if m == 0:
        return -lad[1]
    return 0.5 * (lad[m - 1] - lad[m + 1])


def _j_and_derivs(m, x):
    """(J_m, J_m', J_m'') at scalar x > 0."""
    lad = bessel_j_ladder(m + 1, x)
    j = lad[m]
    jp = -lad[1] if m == 0 else 0.5 * (lad[m - 1] - lad[m + 1])
    jpp = -jp / x - (1.0 - m * m / (x * x)) * j
    return j, jp, jpp


def mcmahon_guess(kind: str, m: int, n: int) -> float:
    """McMahon's large-zero expansion for the n-th zero of J_m or J_m'."""
    mu = 4.0 * m * m
    if kind == "j":
        b = (n + 0.5 * m - 0.25) * math.pi
        e = 8.0 * b
        return (b - (mu - 1) / e
                - 4 * (mu - 1) * (7 * mu - 31) / (3 * e**3)
                - 32 * (mu - 1) * (83 * mu * mu - 982 * mu + 3779) / (15 * e**5))
    b = (n + 0.5 * m - 0.75) * math.pi
    e = 8.0 * b
    return (b - (mu + 3) / e
            - 4 * (7 * mu * mu + 82 * mu - 9) / (3 * e**3)
            - 32 * (83 * mu**3 + 2075 * mu * mu - 3039 * mu + 3537) / (15 * e**5))


def _scan_lower_bound(kind, m):
    if m == 0:
        return 1.0 if kind == "j" else 0.5
    # first zero of J_m and J_m' both exceed m
    return max(math.sqrt(m * (m + 2.0)) if kind == "j" else float(m), 0.5)


def _newton_polish(kind, m, lo, hi):
    """One root of J_m (or J_m') inside (lo, hi), to ~1e-14 relative."""
    f = (lambda x: _j_and_derivs(m, x)[:2]) if kind == "j" else \
        (lambda x: _j_and_derivs(m, x)[1:])
    flo = f(lo)[0]
    x = 0.5 * (lo + hi)
    for _ in range(60):
        fx, dfx = f(x)
        if fx == 0.0:
            return x
        if (fx > 0) == (flo > 0):
            lo = x
        else:
            hi = x
        step = fx / dfx if dfx != 0 else hi - lo
        xn = x - step
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) < 1e-15 * x:
            return xn
        x = xn
    return x


def bessel_zeros_upto(kind: str, m: int, x_max: float) -> np.ndarray:
    """All positive zeros of J_m (kind="j") or J_m' (kind="jprime") up to x_max.

    J_0' shares its positive zeros with J_1 under the standard indexing that
    drops the trivial zero at 0.
    """
    if kind == "jprime" and m == 0:
        return bessel_zeros_upto("j", 1, x_max)
    lo = _scan_lower_bound(kind, m)
    if lo >= x_max:
        return np.zeros(0)
    step = math.pi / 2
    grid = np.arange(lo, x_max + step, step)
    lad = bessel_j_ladder(m + 1, grid)
    if kind == "j":
        vals = lad[m]
    else:
        vals = -lad[1] if m == 0 else 0.5 * (lad[m - 1] - lad[m + 1])
    sgn = np.sign(vals)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    zeros = [_newton_polish(kind, m, grid[i], grid[i + 1]) for i in flips]
    return np.array([z for z in zeros if z <= x_max])


@functools.lru_cache(maxsize=None)
def _zeros_cached(kind, m, n_needed):
    # grow the search window until n_needed zeros are found
    guess = mcmahon_guess(kind, m, n_needed)
    x_max = max(guess + 2 * math.pi, m + 10.0)
    for _ in range(20):
        z = bessel_zeros_upto(kind, m, x_max)
        if len(z) >= n_needed:
            return tuple(z[:n_needed])
        x_max *= 1.5
    raise IndexingError(f"could not bracket zero #{n_needed} of kind={kind}, m={m}")


def bessel_zero(kind: str, m: int, n: int) -> float:
    """n-th positive zero (n >= 1) of J_m or J_m', to ~1e-14 relative.

    kind="jprime", m=0 follows the standard indexing that excludes the
    trivial zero of J_0' at the origin.
    """
    if kind not in ("j", "jprime"):
        raise ValueError("kind must be 'j' or 'jprime'")
    if m < 0 or n < 1:
        raise IndexingError(f"need m >= 0 and n >= 1, got m={m}, n={n}")
    return _zeros_cached(kind, m, n)[n - 1]
