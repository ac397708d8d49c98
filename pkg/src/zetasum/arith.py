"""Arithmetic building blocks: von Mangoldt values, the integer indicator,
divisor convolutions and the exponential sums over m and over mr.

X is always an exact rational.  Additive characters e(mX) are evaluated
as e(j/q) with ``j = mp mod q`` reduced in integer arithmetic, so no
large argument ever reaches a transcendental function.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import InexactX
from .numkern import PrecisionContext, _mp_context

__all__ = [
    "RationalX",
    "von_mangoldt",
    "delta_indicator",
    "conv_sum_at_X",
    "exp_sum",
    "exp_log_sum",
    "mangoldt_exp_sum",
    "mangoldt_exp_sum_powers",
    "s_direct",
    "prime_powers",
]

_DEFAULT_CTX = PrecisionContext()


@dataclass(frozen=True)
class RationalX:
    num: int
    den: int = 1
    exactness: str = "exact"  # "exact" | "approximated"

    def __post_init__(self):
        if self.num < 1 or self.den < 1:
            raise ValueError(f"X must be a positive rational, got {self.num}/{self.den}")
        g = math.gcd(self.num, self.den)
        if g != 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)
        if self.exactness not in ("exact", "approximated"):
            raise ValueError(f"bad exactness {self.exactness!r}")

    @classmethod
    def parse(cls, text: str) -> "RationalX":
        """Parse ``p/q``, an integer or a decimal literal (taken exactly)."""
        try:
            frac = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse X from {text!r}") from exc
        return cls(frac.numerator, frac.denominator)

    @classmethod
    def from_float(cls, x: float, max_den: int = 10**12) -> "RationalX":
        frac = Fraction(x).limit_denominator(max_den)
        return cls(frac.numerator, frac.denominator, "exact" if frac == Fraction(x) else "approximated")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_integer(self) -> bool:
        return self.den == 1

    def value(self, ctx: PrecisionContext):
        return ctx.mp.mpf(self.num) / self.den

    def log(self, ctx: PrecisionContext):
        mp = ctx.mp
        return mp.log(self.num) - mp.log(self.den) if self.den > 1 else mp.log(self.num)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def _as_x(X) -> RationalX:
    if isinstance(X, RationalX):
        return X
    if isinstance(X, (int, Fraction)):
        f = Fraction(X)
        return RationalX(f.numerator, f.denominator)
    if isinstance(X, str):
        return RationalX.parse(X)
    raise TypeError(f"X must be RationalX, int, Fraction or str, not {type(X).__name__}")


# --------------------------------------------------------------------------
# sieve cache (built once, extended under a lock, read-only otherwise)

SIEVE_LIMIT = 10**6
_sieve_lock = threading.Lock()
_spf = np.zeros(0, dtype=np.int64)


def _smallest_prime_factors(n: int) -> np.ndarray:
    global _spf
    if len(_spf) > n:
        return _spf
    with _sieve_lock:
        if len(_spf) <= n:
            size = max(n + 1, min(SIEVE_LIMIT, 4 * (n + 1)), 1024)
            spf = np.arange(size, dtype=np.int64)
            for p in range(2, math.isqrt(size - 1) + 1):
                if spf[p] == p:
                    sl = spf[p * p :: p]
                    mask = sl == np.arange(p * p, size, p)
                    sl[mask] = p
            _spf = spf
    return _spf


def _prime_power_base(m: int) -> int:
    """p if m = p^k (k >= 1), else 0."""
    if m < 2:
        return 0
    if m <= SIEVE_LIMIT:
        p = int(_smallest_prime_factors(m)[m])
    else:
        p = next((d for d in range(2, math.isqrt(m) + 1) if m % d == 0), m)
    while m % p == 0:
        m //= p
    return p if m == 1 else 0


@lru_cache(maxsize=16)
def prime_powers(limit: int) -> tuple[tuple[int, int, int], ...]:
    """All (r, p, k) with r = p^k <= limit, ascending in r."""
    if limit < 2:
        return ()
    spf = _smallest_prime_factors(limit)
    out = []
    for r in range(2, limit + 1):
        p = int(spf[r])
        m, k = r, 0
        while m % p == 0:
            m //= p
            k += 1
        if m == 1:
            out.append((r, p, k))
    return tuple(out)


def von_mangoldt(m: int, ctx: PrecisionContext = _DEFAULT_CTX):
    """Lambda(m): log p when m = p^k, else 0."""
    if m < 1:
        raise ValueError(f"von_mangoldt needs m >= 1, got {m}")
    p = _prime_power_base(int(m))
    return ctx.mp.log(p) if p else ctx.mp.zero


def delta_indicator(X) -> int:
    """1 if X is a positive integer, 0 otherwise (decided exactly)."""
    X = _as_x(X)
    if X.exactness != "exact":
        raise InexactX(f"X = {X} is an approximation; integrality is undecidable")
    return 1 if X.den == 1 else 0


def conv_sum_at_X(n: int, X, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum over m*r = X of Lambda(r) log^n m (zero for non-integer X)."""
    X = _as_x(X)
    mp = ctx.mp
    if not X.is_integer:
        return mp.zero
    x = X.num
    acc = mp.zero
    for r in range(2, x + 1):
        if x % r == 0:
            p = _prime_power_base(r)
            if p:
                acc += mp.log(p) * mp.log(x // r) ** n
    return acc


# --------------------------------------------------------------------------
# exponential sums


@lru_cache(maxsize=256)
def _roots(q: int, dps: int):
    """e(j/q) for j = 0..q-1."""
    mp = _mp_context(dps)
    return tuple(mp.mpc(mp.cospi(mp.mpf(2 * j) / q), mp.sinpi(mp.mpf(2 * j) / q)) for j in range(q))


def _character(X: RationalX, ctx: PrecisionContext):
    return _roots(X.den, ctx.dps)


def _floor(Y) -> int:
    return max(0, int(mpmath.floor(Y)))


def _periodic_count_sum(a: int, q: int, M: int, roots):
    """sum_{m=1}^{M} e(m a / q) with 0 <= a < q, exactly by periodicity."""
    if a == 0:
        return roots[0] * M
    # a full period of a nontrivial character vanishes
    acc = roots[0] * 0
    j = 0
    for _ in range(M % q):
        j = (j + a) % q
        acc += roots[j]
    return acc


def exp_sum(X, Y, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum_{1 <= m <= Y} e(mX)."""
    X = _as_x(X)
    roots = _character(X, ctx)
    return _periodic_count_sum(X.num % X.den, X.den, _floor(Y), roots)


@lru_cache(maxsize=32)
def _log_table(limit: int, dps: int):
    """log m for m <= limit, via log m = log p + log(m/p)."""
    mp = _mp_context(dps)
    spf = _smallest_prime_factors(limit)
    logs = [mp.zero, mp.zero]
    for m in range(2, limit + 1):
        p = int(spf[m])
        logs.append(mp.log(m) if p == m else logs[p] + logs[m // p])
    return logs


def exp_log_sum(X, Y, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum_{1 <= m <= Y} e(mX) log m (log m summed per residue class first)."""
    X = _as_x(X)
    mp = ctx.mp
    M = _floor(Y)
    if M < 2:
        return mp.mpc(0)
    logs = _log_table(M, ctx.dps)
    q, a = X.den, X.num % X.den
    roots = _character(X, ctx)
    classes = [mp.zero] * q
    for m in range(2, M + 1):
        j = (m * a) % q
        classes[j] += logs[m]
    return mp.fsum(roots[j] * classes[j] for j in range(q))


def _mangoldt_weighted(X: RationalX, Y, weight, ctx: PrecisionContext):
    """sum_{r p.p. <= Y} Lambda(r) weight(log r) sum_{m <= Y/r} e(m r X)."""
    mp = ctx.mp
    M = _floor(Y)
    if M < 2:
        return mp.mpc(0)
    q, a = X.den, X.num % X.den
    roots = _character(X, ctx)
    logp = {}
    terms = []
    for r, p, k in prime_powers(M):
        lp = logp.get(p)
        if lp is None:
            lp = logp[p] = mp.log(p)
        inner = _periodic_count_sum((r * a) % q, q, M // r, roots)
        terms.append(inner * (lp * weight(k * lp)))
    return mp.fsum(terms)


def mangoldt_exp_sum(n: int, X, Y, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum_{mr <= Y} e(mrX) Lambda(r) log^n(rX)."""
    X = _as_x(X)
    logx = X.log(ctx)
    return _mangoldt_weighted(X, Y, lambda logr: (logr + logx) ** n, ctx)


def mangoldt_exp_sum_powers(k: int, X, Y, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum_{mr <= Y} e(mrX) Lambda(r) log^k r."""
    return _mangoldt_weighted(_as_x(X), Y, lambda logr: logr**k, ctx)


def s_direct(k: int, Y, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum_{mr <= Y} Lambda(r) log^k r  =  sum_r Lambda(r) log^k r floor(Y/r)."""
    mp = ctx.mp
    M = _floor(Y)
    if M < 2:
        return mp.zero
    logp = {}
    terms = []
    for r, p, e in prime_powers(M):
        lp = logp.get(p)
        if lp is None:
            lp = logp[p] = mp.log(p)
        terms.append(lp * (e * lp) ** k * (M // r))
    return mp.fsum(terms)
