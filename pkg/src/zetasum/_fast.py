"""Double-precision, numpy-vectorized zeta and Hardy Z.

Only used where the answer is discrete (sign patterns, zero counts) or is
immediately refined at extended precision.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import bernoulli, factorial, loggamma

_K = 18
_BCOEF = np.array([bernoulli(2 * k)[-1] / factorial(2 * k) for k in range(1, _K + 1)])
_CHUNK_ELEMS = 2_000_000


def _cutoff(smax: complex) -> int:
    return max(int(abs(smax.imag) / 2) + 20, int(abs(smax.real)) + 20, 40)


def zeta(s) -> np.ndarray:
    """Euler-Maclaurin zeta for an array of complex ``s`` (``s != 1``)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if s.size == 0:
        return s.copy()
    N = _cutoff(s[np.argmax(np.abs(s))])
    logm = np.log(np.arange(1, N, dtype=float))
    out = np.empty_like(s)
    rows = max(1, _CHUNK_ELEMS // N)
    for lo in range(0, s.size, rows):
        ss = s[lo : lo + rows]
        out[lo : lo + rows] = np.exp(-np.outer(ss, logm)).sum(axis=1)
    logN = math.log(N)
    uN = np.exp(-s * logN)
    total = out + N * uN / (s - 1) + uN / 2
    poch = s.copy()
    npow = 1.0 / N
    for k in range(1, _K + 1):
        total += _BCOEF[k - 1] * poch * npow * uN
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        npow /= N * N
    return total


def theta(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return loggamma(0.25 + 0.5j * t).imag - 0.5 * t * math.log(math.pi)


def hardy_z(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return (np.exp(1j * theta(t)) * zeta(0.5 + 1j * t)).real


def gram_points(t_lo: float, t_hi: float) -> np.ndarray:
    """Gram points g_k (theta(g_k) = k pi) with t_lo < g_k < t_hi, t_lo >= 7."""
    if t_hi <= t_lo:
        return np.empty(0)
    k_lo = math.floor(float(theta(t_lo)) / math.pi) + 1
    k_hi = math.ceil(float(theta(t_hi)) / math.pi) - 1
    if k_hi < k_lo:
        return np.empty(0)
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    # initial guess from theta(t) ~ (t/2) log(t/2 pi e) - pi/8
    from scipy.special import lambertw

    g = 2 * math.pi * np.exp(1 + lambertw((8 * k + 1) / (8 * math.e)).real)
    for _ in range(6):
        dtheta = 0.5 * np.log(g / (2 * math.pi))
        g = g - (theta(g) - k * math.pi) / dtheta
    return g[(g > t_lo) & (g < t_hi)]
