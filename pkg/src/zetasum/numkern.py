"""Extended-precision zeta kernel.

Values are mpmath ``mpc``/``mpf`` numbers bound to a private ``MPContext``
per working precision, so concurrent callers at different precisions never
touch mpmath's global state.

zeta and its derivatives come from one Euler-Maclaurin evaluation carried
out on truncated Taylor series in the shift ``s -> s + eps`` ("jets"): the
direct sum contributes ``(-log m)^j m^{-s} / j!`` and the tail terms are
differentiated exactly.  Cauchy-circle differentiation is kept as an
alternate route (``method="cauchy"``) and is the route used for chi.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import (
    NonFiniteValue,
    PoleAtOne,
    PoleOfChi,
    PoleTooClose,
    PrecisionUnachievable,
    ZeroOfZeta,
)

__all__ = [
    "PrecisionContext",
    "zeta",
    "zeta_derivative",
    "zeta_jet",
    "chi",
    "chi_derivative",
    "functional_equation_residual",
    "xi_log_derivative",
    "riemann_siegel_theta",
    "riemann_siegel_theta_derivative",
    "hardy_Z",
    "cauchy_derivative",
]


@lru_cache(maxsize=None)
def _mp_context(dps: int) -> mpmath.ctx_mp.MPContext:
    mp = mpmath.MPContext()
    mp.dps = dps
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for a call tree.

    ``digits`` is the accuracy promised to callers; arithmetic runs at
    ``digits + guard_digits``.
    """

    digits: int = 40
    guard_digits: int = 10

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError(f"digits must be >= 15, got {self.digits}")
        if self.guard_digits < 5:
            raise ValueError(f"guard_digits must be >= 5, got {self.guard_digits}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard_digits

    @property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        return _mp_context(self.dps)

    @property
    def resolution(self):
        return self.mp.mpf(10) ** (-self.digits)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits, self.guard_digits)

    def cvalue(self, s):
        """Coerce ``s`` (complex, real, string or mpmath number) to an mpc."""
        if isinstance(s, str):
            return self.mp.mpc(self.mp.mpmathify(s))
        if isinstance(s, complex):
            return self.mp.mpc(s.real, s.imag)
        return self.mp.mpc(s)


def _check_finite(mp, z):
    if isinstance(z, mpmath.mpc) or hasattr(z, "imag"):
        ok = mp.isfinite(z.real) and mp.isfinite(z.imag)
    else:
        ok = mp.isfinite(z)
    if not ok:
        raise NonFiniteValue(f"non-finite intermediate value {z}")
    return z


# --------------------------------------------------------------------------
# Truncated power series helpers.  A jet is a list of Taylor coefficients.


def _jet_mul(a, b, order):
    out = []
    for k in range(order + 1):
        acc = a[0] * b[k]
        for i in range(1, k + 1):
            acc += a[i] * b[k - i]
        out.append(acc)
    return out


def _jet_mul_linear(a, c, order):
    """Multiply jet ``a`` by ``(c + eps)``."""
    out = [a[0] * c]
    for k in range(1, order + 1):
        out.append(a[k] * c + a[k - 1])
    return out


# --------------------------------------------------------------------------
# Cached tables: smallest prime factors (precision free) and, per working
# precision and jet order, the columns (-log m)^j / j!.

_SPF_LOCK = threading.Lock()
_spf = np.zeros(2, dtype=np.int64)


def _spf_table(n: int) -> np.ndarray:
    global _spf
    if len(_spf) > n:
        return _spf
    with _SPF_LOCK:
        if len(_spf) > n:
            return _spf
        size = max(n + 1, 2 * len(_spf), 1024)
        spf = np.arange(size, dtype=np.int64)
        for p in range(2, math.isqrt(size - 1) + 1):
            if spf[p] == p:
                block = spf[p * p :: p]
                mask = block == np.arange(p * p, size, p)
                block[mask] = p
        _spf = spf
        return spf


class _LogPowerTable:
    def __init__(self, mp, order):
        self.mp = mp
        self.order = order
        self.size = 1
        self.logs = [mp.zero, mp.zero]  # index 0 unused
        self.cols = [[mp.zero, mp.one]] + [[mp.zero, mp.zero] for _ in range(order)]
        self.lock = threading.Lock()

    def ensure(self, n):
        if self.size >= n:
            return
        with self.lock:
            if self.size >= n:
                return
            mp = self.mp
            target = max(n, 2 * self.size)
            spf = _spf_table(target)
            logs = self.logs
            cols = [list(c) for c in self.cols]
            inv_fact = [mp.one / mp.factorial(j) for j in range(self.order + 1)]
            for m in range(self.size + 1, target + 1):
                p = int(spf[m])
                lg = mp.log(m) if p == m else logs[p] + logs[m // p]
                logs.append(lg)
                neg = -lg
                pw = mp.one
                for j in range(self.order + 1):
                    cols[j].append(pw * inv_fact[j])
                    pw *= neg
            self.cols = cols
            self.size = target


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def _log_table(mp, order, n) -> _LogPowerTable:
    key = (mp.prec, order)
    with _TABLES_LOCK:
        tab = _TABLES.get(key)
        if tab is None:
            tab = _TABLES[key] = _LogPowerTable(mp, order)
    tab.ensure(n)
    return tab


@lru_cache(maxsize=64)
def _bernoulli_coeffs(dps: int, count: int):
    mp = _mp_context(dps)
    return tuple(mp.bernoulli(2 * k) / mp.factorial(2 * k) for k in range(1, count + 1))


# --------------------------------------------------------------------------
# zeta


def _em_cutoff(s, ctx: PrecisionContext) -> int:
    t = abs(float(s.imag))
    sig = abs(float(s.real))
    return max(math.ceil(t / 2), ctx.digits, math.ceil(sig) + 2, 2)


def zeta_jet(s, order: int, ctx: PrecisionContext):
    """Return ``[zeta(s), zeta'(s), ..., zeta^(order)(s)]``.

    Euler-Maclaurin with ``N = max(ceil(|t|/2), digits)`` direct terms;
    Bernoulli corrections are added until the next one falls below
    ``10^-(digits+guard)`` relative to the running value.
    """
    mp = ctx.mp
    s = ctx.cvalue(s)
    if abs(s - 1) < ctx.resolution:
        raise PoleAtOne(f"s = {s} is within {ctx.resolution} of the pole at 1")
    N = _em_cutoff(s, ctx)
    tab = _log_table(mp, order, N)
    spf = _spf_table(N)
    logs = tab.logs

    # m^{-s} for m < N, built multiplicatively from prime powers.
    pw = [None, mp.one]
    for m in range(2, N):
        p = int(spf[m])
        if p == m:
            pw.append(mp.expj(-s.imag * logs[m]) * mp.exp(-s.real * logs[m]))
        else:
            pw.append(pw[p] * pw[m // p])
    head = [mp.fdot(tab.cols[j][1:N], pw[1:N]) for j in range(order + 1)]

    logN = mp.log(N)
    uN = mp.exp(-s * logN)
    e_jet = [uN * c for c in (tab.cols[j][N] for j in range(order + 1))]
    sm1 = s - 1
    inv = mp.one / sm1
    r_jet = []
    for j in range(order + 1):
        r_jet.append(inv if j % 2 == 0 else -inv)
        inv /= sm1
    tail = _jet_mul(e_jet, r_jet, order)
    tail = [N * a + b / 2 for a, b in zip(tail, e_jet)]

    # Bernoulli corrections: sum_k B_2k/(2k)! (s)_{2k-1} N^{1-2k} N^{-s}.
    tol = mp.mpf(10) ** (-ctx.dps)
    scale = max(abs(head[0]), abs(tail[0]), mp.one)
    poch = _jet_mul_linear([mp.one] + [mp.zero] * order, s, order)  # (s)_1
    npow = mp.one / N
    inv_n2 = mp.one / (N * N)
    bsum = [mp.zero] * (order + 1)
    kmax = 6 * ctx.dps + 40
    coeffs = _bernoulli_coeffs(ctx.dps, kmax)
    prev = None
    for k in range(1, kmax + 1):
        term = [coeffs[k - 1] * npow * c for c in poch]
        size = max(abs(c) for c in term) * abs(uN)
        bsum = [a + b for a, b in zip(bsum, term)]
        # remainder after this term is bounded by the next term times |s+2k+1|/(sigma+2k+1)
        if size * abs(s + 2 * k + 1) / abs(s.real + 2 * k + 1) < tol * scale:
            break
        if prev is not None and size > prev and k > 4:
            raise PrecisionUnachievable(
                f"Euler-Maclaurin tail diverges at s = {s} before reaching {ctx.dps} digits"
            )
        prev = size
        poch = _jet_mul_linear(poch, s + 2 * k - 1, order)
        poch = _jet_mul_linear(poch, s + 2 * k, order)
        npow *= inv_n2
    else:
        raise PrecisionUnachievable(f"Euler-Maclaurin tail did not converge at s = {s}")
    tail = [a + b for a, b in zip(tail, _jet_mul(e_jet, bsum, order))]

    out = []
    fact = mp.one
    for j in range(order + 1):
        if j:
            fact *= j
        out.append(_check_finite(mp, (head[j] + tail[j]) * fact))
    return out


def zeta(s, ctx: PrecisionContext):
    """Riemann zeta at ``s`` (any ``s != 1``)."""
    return zeta_jet(s, 0, ctx)[0]


def cauchy_derivative(f, s, n: int, radius, nodes: int, mp, conj_symmetric: bool = False):
    """n-th derivative of analytic ``f`` at ``s`` by the trapezoidal rule on a circle.

    With ``conj_symmetric`` and real ``s`` only the upper half circle is
    evaluated (``f(conj z) = conj f(z)``).
    """
    r = mp.mpf(radius)
    acc = mp.mpc(0)
    if conj_symmetric and s.imag == 0 and nodes % 2 == 0:
        half = nodes // 2
        for k in range(half + 1):
            w = mp.expjpi(mp.mpf(2 * k) / nodes)
            val = f(s + r * w) * w ** (-n)
            if k == 0 or k == half:
                acc += val.real
            else:
                acc += 2 * val.real
        acc = mp.mpc(acc.real, 0)
    else:
        for k in range(nodes):
            w = mp.expjpi(mp.mpf(2 * k) / nodes)
            acc += f(s + r * w) * w ** (-n)
    return acc * mp.factorial(n) / (nodes * r**n)


def _cauchy_nodes(n: int, ctx: PrecisionContext) -> int:
    return 32 * (n + 2) * math.ceil(ctx.digits / 15)


def zeta_derivative(n: int, s, ctx: PrecisionContext, method: str = "series"):
    """n-th derivative of zeta at ``s``.

    ``method="series"`` differentiates Euler-Maclaurin exactly;
    ``method="cauchy"`` integrates zeta on a circle of radius
    ``min(0.25, |s-1|/2)`` around ``s``.
    """
    if n < 0:
        raise ValueError("derivative order must be >= 0")
    s = ctx.cvalue(s)
    if method == "series":
        return zeta_jet(s, n, ctx)[n]
    if method != "cauchy":
        raise ValueError(f"unknown method {method!r}")
    if n == 0:
        return zeta(s, ctx)
    mp = ctx.mp
    r = min(mp.mpf(0.25), abs(s - 1) / 2)
    if r < mp.mpf("1e-3"):
        raise PoleTooClose(f"s = {s} is too close to the pole for a derivative circle")
    return _check_finite(mp, cauchy_derivative(lambda z: zeta(z, ctx), s, n, r, _cauchy_nodes(n, ctx), mp))


# --------------------------------------------------------------------------
# chi and the functional equation


def _nearest_chi_pole(s):
    # poles of Gamma((1-s)/2): s = 1, 3, 5, ...
    k = max(0, round((float(s.real) - 1) / 2))
    return 1 + 2 * k


def chi(s, ctx: PrecisionContext):
    """Factor in ``zeta(s) = chi(s) zeta(1-s)``.

    Evaluated as ``pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2)``, which equals
    ``2^s pi^(s-1) sin(pi s/2) Gamma(1-s)`` without its removable
    singularities at even integers.
    """
    mp = ctx.mp
    s = ctx.cvalue(s)
    if abs(s - _nearest_chi_pole(s)) < ctx.resolution:
        raise PoleOfChi(f"chi has a pole at s = {_nearest_chi_pole(s)}")
    try:
        val = mp.power(mp.pi, s - mp.mpf(0.5)) * mp.gamma((1 - s) / 2) * mp.rgamma(s / 2)
    except ValueError as exc:  # exact Gamma pole
        raise PoleOfChi(str(exc)) from None
    return _check_finite(mp, val)


def chi_derivative(n: int, s, ctx: PrecisionContext):
    """n-th derivative of chi by Cauchy-circle differentiation."""
    mp = ctx.mp
    s = ctx.cvalue(s)
    if n == 0:
        return chi(s, ctx)
    r = min(mp.mpf(0.25), abs(s - _nearest_chi_pole(s)) / 2)
    if r < mp.mpf("1e-3"):
        raise PoleTooClose(f"s = {s} is too close to a pole of chi")
    return _check_finite(mp, cauchy_derivative(lambda z: chi(z, ctx), s, n, r, _cauchy_nodes(n, ctx), mp))


def functional_equation_residual(n: int, s, ctx: PrecisionContext):
    """|zeta^(n)(s) - (1/chi(1-s)) sum_k C(n,k) (-1)^k chi^(n-k)(s)/chi(s) zeta^(k)(1-s)|."""
    mp = ctx.mp
    s = ctx.cvalue(s)
    lhs = zeta_jet(s, n, ctx)[n]
    zeta_reflected = zeta_jet(1 - s, n, ctx)
    chi_s = chi(s, ctx)
    acc = mp.mpc(0)
    for k in range(n + 1):
        acc += mp.binomial(n, k) * (-1) ** k * chi_derivative(n - k, s, ctx) / chi_s * zeta_reflected[k]
    rhs = acc / chi(1 - s, ctx)
    return abs(lhs - rhs)


# --------------------------------------------------------------------------
# xi'/xi


def xi_log_derivative(s, ctx: PrecisionContext):
    """(2s-1)/(s(s-1)) - log(pi)/2 + psi(s/2)/2 + zeta'/zeta(s)."""
    mp = ctx.mp
    s = ctx.cvalue(s)
    z0, z1 = zeta_jet(s, 1, ctx)
    if abs(z0) < ctx.resolution:
        raise ZeroOfZeta(f"|zeta(s)| = {mp.nstr(abs(z0), 5)} at s = {s}")
    val = (2 * s - 1) / (s * (s - 1)) - mp.log(mp.pi) / 2 + mp.digamma(s / 2) / 2 + z1 / z0
    return _check_finite(mp, val)


# --------------------------------------------------------------------------
# Riemann-Siegel theta and Hardy's Z


def riemann_siegel_theta(t, ctx: PrecisionContext):
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    mp = ctx.mp
    t = mp.mpf(t)
    return mp.im(mp.loggamma(mp.mpc(0.25, t / 2))) - t / 2 * mp.log(mp.pi)


def riemann_siegel_theta_derivative(t, ctx: PrecisionContext):
    mp = ctx.mp
    t = mp.mpf(t)
    return mp.re(mp.digamma(mp.mpc(0.25, t / 2))) / 2 - mp.log(mp.pi) / 2


def hardy_Z(t, ctx: PrecisionContext):
    """Real-valued Z(t) = exp(i theta(t)) zeta(1/2 + it)."""
    mp = ctx.mp
    t = mp.mpf(t)
    z = zeta(mp.mpc(0.5, t), ctx)
    return (mp.expj(riemann_siegel_theta(t, ctx)) * z).real
