"""Laurent coefficients of zeta and zeta'/zeta at s = 1.

    zeta(s)        =  1/(s-1) + sum_j C_j (s-1)^j
    zeta'/zeta(s)  = -1/(s-1) + sum_j A_j (s-1)^j

Both are read off trapezoidal Cauchy integrals of the regular parts on a
circle about s = 1.  A_j also follows from the C_j by Israilov's
recursion; the two routes are kept independent so each checks the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .numkern import PrecisionContext, zeta_jet

__all__ = ["LaurentTable", "stieltjes_C", "israilov_A", "a_oracle", "laurent_table", "MAX_J"]

MAX_J = 20
DEFAULT_RADIUS = "0.5"


@dataclass(frozen=True)
class LaurentTable:
    C: tuple
    A: tuple
    j_max: int
    digits: int


def _nodes(ctx: PrecisionContext) -> int:
    return 64 * math.ceil(ctx.digits / 15)


def _circle_coefficients(f, j_max: int, ctx: PrecisionContext, radius):
    """Taylor coefficients 0..j_max about s = 1 of ``f``, real on the real axis."""
    mp = ctx.mp
    r = mp.mpf(radius)
    M = _nodes(ctx)
    half = M // 2
    # f(conj s) = conj f(s): the lower half circle mirrors the upper one
    values = []
    for k in range(half + 1):
        w = mp.expjpi(mp.mpf(2 * k) / M)
        values.append((w, f(1 + r * w)))
    out = []
    for j in range(j_max + 1):
        acc = mp.zero
        for k, (w, val) in enumerate(values):
            term = (val * w ** (-j)).real
            acc += term if k in (0, half) else 2 * term
        out.append(acc / (M * r**j))
    return out


def _check_j(j_max: int):
    if not 0 <= j_max <= MAX_J:
        raise ValueError(f"j_max must lie in 0..{MAX_J}, got {j_max}")


def stieltjes_C(j_max: int, ctx: PrecisionContext, radius=DEFAULT_RADIUS) -> list:
    """C_0..C_{j_max} (C_j = (-1)^j gamma_j / j!)."""
    _check_j(j_max)
    return _cached_C(j_max, ctx, str(radius))


def a_oracle(j_max: int, ctx: PrecisionContext, radius=DEFAULT_RADIUS) -> list:
    """A_0..A_{j_max} straight from zeta'/zeta, independent of the recursion."""
    _check_j(j_max)
    return _cached_A(j_max, ctx, str(radius))


@lru_cache(maxsize=32)
def _cached_C(j_max, ctx, radius):
    def regular(s):
        return zeta_jet(s, 0, ctx)[0] - 1 / (s - 1)

    return tuple(_circle_coefficients(regular, j_max, ctx, radius))


@lru_cache(maxsize=32)
def _cached_A(j_max, ctx, radius):
    def regular(s):
        z0, z1 = zeta_jet(s, 1, ctx)
        return z1 / z0 + 1 / (s - 1)

    return tuple(_circle_coefficients(regular, j_max, ctx, radius))


def israilov_A(C, j_max: int) -> list:
    """A_0 = C_0;  A_j = (j+1) C_j - sum_{k<j} A_k C_{j-1-k}."""
    if len(C) < j_max + 1:
        raise ValueError(f"need C_0..C_{j_max}, got {len(C)} values")
    A = [C[0]]
    for j in range(1, j_max + 1):
        acc = (j + 1) * C[j]
        for k in range(j):
            acc -= A[k] * C[j - 1 - k]
        A.append(acc)
    return A


@lru_cache(maxsize=16)
def laurent_table(j_max: int, ctx: PrecisionContext) -> LaurentTable:
    """C and A (the latter by recursion) to index j_max, cached per (j_max, precision)."""
    C = stieltjes_C(j_max, ctx)
    return LaurentTable(tuple(C), tuple(israilov_A(C, j_max)), j_max, ctx.digits)
