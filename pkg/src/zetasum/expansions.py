"""Right-hand sides of the explicit formulae for sum_{0<gamma<=T} zeta^(n)(rho) X^rho.

Every formula returns an ``ExpansionBreakdown`` holding one entry per
displayed summand.  Integer-X formulae are evaluated in two independent
ways (before and after expanding log(T/2piX) binomially) so each can be
checked against the other.

Notation used below: W = T/2pi, L = log W, l = log X, Y = W/X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

from .arith import (
    RationalX,
    _as_x,
    _character,
    _floor,
    _log_table,
    conv_sum_at_X,
    delta_indicator,
    exp_log_sum,
    exp_sum,
    mangoldt_exp_sum,
    mangoldt_exp_sum_powers,
    prime_powers,
    von_mangoldt,
)
from .constants import LaurentTable
from .errors import OutOfContract, TablesTooShallow, XNotInteger
from .numkern import PrecisionContext

__all__ = [
    "ExpansionBreakdown",
    "theorem1_rhs",
    "explicit2_rhs",
    "corollary_integer_rhs",
    "general_sc_rhs",
    "s_asymptotic",
    "fujii_shanks_rhs",
    "fujii_integer_rhs",
    "fujii3_rhs",
    "landau_rhs",
]

_DEFAULT_CTX = PrecisionContext()
ERROR_FORMS = ("rh", "unconditional")


@dataclass(frozen=True)
class ExpansionBreakdown:
    terms: dict
    total: object
    error_scale: object
    meta: dict = field(default_factory=dict)

    def __getitem__(self, label):
        return self.terms[label]


def _breakdown(ctx, terms, error_scale, **meta) -> ExpansionBreakdown:
    mp = ctx.mp
    terms = {k: mp.mpc(v) for k, v in terms.items()}
    total = mp.fsum(terms.values()) if terms else mp.mpc(0)
    meta.setdefault("digits", ctx.digits)
    return ExpansionBreakdown(terms, mp.mpc(total), error_scale, meta)


def _height(T, ctx):
    mp = ctx.mp
    T = mp.mpf(T)
    if not T > 0:
        raise OutOfContract(f"T must be positive, got {T}")
    W = T / (2 * mp.pi)
    return T, W


def _rh_scale(T, n, mp):
    return mp.sqrt(T) * mp.log(T) ** (n + 2)


def _error_scale(T, n, mp, form):
    if form == "rh":
        return _rh_scale(T, n, mp)
    if form == "unconditional":
        # C is unspecified; only the shape T exp(-sqrt(log T)) is meaningful
        return T * mp.exp(-mp.sqrt(mp.log(T)))
    raise ValueError(f"error_form must be one of {ERROR_FORMS}, got {form!r}")


def _need_tables(tables: LaurentTable, n: int):
    if tables.j_max < n:
        raise TablesTooShallow(f"Laurent tables reach j = {tables.j_max}, need j = {n}")


def _stieltjes_weight(l: int, C, mp):
    """-1 + sum_{j<=l} (-1)^j C_j."""
    return -1 + mp.fsum((-1) ** j * C[j] for j in range(l + 1))


def _check_n(n):
    if int(n) != n or n < 1:
        raise OutOfContract(f"n must be an integer >= 1, got {n}")


# --------------------------------------------------------------------------
# arbitrary positive X


def _explicit_common(n, X, T, ctx):
    _check_n(n)
    mp = ctx.mp
    X = _as_x(X)
    T, W = _height(T, ctx)
    x = X.value(ctx)
    # relative slack so that T = 2 pi X typed as a float is accepted
    if T < 2 * mp.pi * x * (1 - mp.mpf(10) ** -12):
        raise OutOfContract(f"T = {T} is below 2*pi*X; the sums over m <= T/(2 pi X) would be empty")
    logx = X.log(ctx)
    Y = W / x
    sign = (-1) ** n
    delta = delta_indicator(X)
    delta_main = W * (logx**n * (mp.log(W) / 2 - mp.mpf(1) / 2 + mp.pi * 1j / 4))
    delta_conv = -W * conv_sum_at_X(n, X, ctx)
    terms = {
        "delta_main": sign * delta * delta_main,
        "delta_conv": sign * delta * delta_conv,
        "expsum_plain": sign * x * logx**n * (logx / 2 - mp.pi * 1j / 4) * exp_sum(X, Y, ctx),
        "expsum_log": sign * x / 2 * logx**n * exp_log_sum(X, Y, ctx),
    }
    return X, T, x, logx, Y, sign, terms


def theorem1_rhs(n: int, X, T, ctx: PrecisionContext = _DEFAULT_CTX) -> ExpansionBreakdown:
    """Main terms for fixed positive rational X, with the sum over mr weighted by log^n(rX)."""
    X, T, x, logx, Y, sign, terms = _explicit_common(n, X, T, ctx)
    terms["mangoldt_osc"] = -sign * x * mangoldt_exp_sum(n, X, Y, ctx)
    return _breakdown(ctx, terms, _rh_scale(T, n, ctx.mp), n=n, X=str(X), T=T, formula="theorem1")


def explicit2_rhs(n: int, X, T, ctx: PrecisionContext = _DEFAULT_CTX) -> ExpansionBreakdown:
    """As ``theorem1_rhs`` with log^n(rX) expanded binomially in log r and log X."""
    X, T, x, logx, Y, sign, terms = _explicit_common(n, X, T, ctx)
    for k in range(n + 1):
        terms[f"mangoldt_osc_{k}"] = (
            -sign * x * comb(n, k) * logx ** (n - k) * mangoldt_exp_sum_powers(k, X, Y, ctx)
        )
    return _breakdown(ctx, terms, _rh_scale(T, n, ctx.mp), n=n, X=str(X), T=T, formula="explicit2")


def fujii3_rhs(X, T, ctx: PrecisionContext = _DEFAULT_CTX) -> ExpansionBreakdown:
    """Fujii's n = 1 formula for fixed positive X, transcribed as he wrote it."""
    mp = ctx.mp
    X = _as_x(X)
    T, W = _height(T, ctx)
    x = X.value(ctx)
    logx = X.log(ctx)
    Y = W / x
    delta = delta_indicator(X)
    log2_sum = _exp_log_power_sum(X, Y, 2, ctx)
    # sum_{mr <= Y} e(mrX) Lambda(r) log m
    osc = _exp_mangoldt_log_m(X, Y, ctx)
    terms = {
        "delta_main": -delta * W * logx * (mp.log(W) / 2 - mp.mpf(1) / 2 + mp.pi * 1j / 4),
        "delta_conv": delta * W * conv_sum_at_X(1, X, ctx),
        "expsum_log2": x * log2_sum,
        "expsum_log": x * logx / 2 * exp_log_sum(X, Y, ctx),
        "expsum_plain": -(x * logx**2 / 2 - mp.pi * 1j / 4 * x * logx) * exp_sum(X, Y, ctx),
        "mangoldt_osc": -x * osc,
    }
    return _breakdown(ctx, terms, _rh_scale(T, 1, mp), n=1, X=str(X), T=T, formula="fujii3")


def _exp_log_power_sum(X: RationalX, Y, power: int, ctx):
    """sum_{m <= Y} e(mX) log^power m, for the literal n = 1 transcription only."""
    mp = ctx.mp
    M = _floor(Y)
    if M < 2:
        return mp.mpc(0)
    logs = _log_table(M, ctx.dps)
    roots = _character(X, ctx)
    q, a = X.den, X.num % X.den
    classes = [mp.zero] * q
    for m in range(2, M + 1):
        classes[(m * a) % q] += logs[m] ** power
    return mp.fsum(roots[j] * classes[j] for j in range(q))


def _exp_mangoldt_log_m(X: RationalX, Y, ctx):
    mp = ctx.mp
    M = _floor(Y)
    if M < 2:
        return mp.mpc(0)
    logs = _log_table(M, ctx.dps)
    roots = _character(X, ctx)
    q, a = X.den, X.num % X.den
    classes = [mp.zero] * q
    for r, p, _ in prime_powers(M):
        lam = logs[p]
        for m in range(2, M // r + 1):
            classes[(m * r * a) % q] += lam * logs[m]
    return mp.fsum(roots[j] * classes[j] for j in range(q))


# --------------------------------------------------------------------------
# integer X


def _integer_x(X) -> RationalX:
    X = _as_x(X)
    if X.exactness != "exact" or not X.is_integer:
        raise XNotInteger(f"X = {X} is not a positive integer")
    return X


def corollary_integer_rhs(
    n: int,
    X,
    T,
    tables: LaurentTable,
    ctx: PrecisionContext = _DEFAULT_CTX,
    error_form: str = "rh",
) -> ExpansionBreakdown:
    """Main terms for positive integer X, expanded in powers of log(T/2pi) and log X.

    The powers of log X are kept nonnegative (l^(n-k+u) rather than
    l^n * l^(u-k)), so nothing is singular; X = 1 is still routed to
    ``general_sc_rhs``.
    """
    _check_n(n)
    X = _integer_x(X)
    _need_tables(tables, n)
    if X.num == 1:
        return general_sc_rhs(n, T, tables, ctx, error_form=error_form)
    mp = ctx.mp
    T, W = _height(T, ctx)
    L = mp.log(W)
    lx = X.log(ctx)
    C, A = tables.C, tables.A
    lead = (-1) ** (n + 1) * W

    g1 = []
    for k in range(n + 1):
        for u in range(k + 2):
            g1.append(comb(n, k) * comb(k + 1, u) * (-1) ** u * L ** (k + 1 - u) * lx ** (n - k + u) / (k + 1))
    g2 = []
    for k in range(n + 1):
        for l in range(k + 1):
            w = _stieltjes_weight(l, C, mp) * factorial(l) * (-1) ** l
            for u in range(k - l + 1):
                g2.append(
                    comb(n, k) * comb(k, l) * comb(k - l, u) * (-1) ** u * w * L ** (k - l - u) * lx ** (n - k + u)
                )
    g3 = [comb(n, k) * (-1) ** (k + 1) * factorial(k) * A[k] * lx ** (n - k) for k in range(n + 1)]
    terms = {
        "log_power_sum": lead * mp.fsum(g1),
        "stieltjes_sum": lead * mp.fsum(g2),
        "laurent_A_sum": lead * mp.fsum(g3),
        "boundary": lead * (-(lx**n) * (L - 1) + conv_sum_at_X(n, X, ctx)),
    }
    return _breakdown(
        ctx,
        terms,
        _error_scale(T, n, mp, error_form),
        n=n,
        X=str(X),
        T=T,
        formula="integer",
        error_form=error_form,
    )


def _corollary_pre_binomial(n, X, T, tables, ctx: PrecisionContext = _DEFAULT_CTX):
    """The same main terms before expanding log(T/2piX) = L - l; used as a cross-check."""
    X = _integer_x(X)
    _need_tables(tables, n)
    mp = ctx.mp
    T, W = _height(T, ctx)
    L = mp.log(W)
    lx = X.log(ctx)
    LY = mp.log(T / (2 * mp.pi * X.value(ctx)))
    C, A = tables.C, tables.A
    sign = (-1) ** n
    D = conv_sum_at_X(n, X, ctx)
    s_terms = []
    for k in range(n + 1):
        inner = W * LY ** (k + 1) / (k + 1)
        inner += mp.fsum(
            comb(k, l) * (-1) ** l * factorial(l) * _stieltjes_weight(l, C, mp) * W * LY ** (k - l)
            for l in range(k + 1)
        )
        inner += (-1) ** (k + 1) * factorial(k) * A[k] * W
        s_terms.append(comb(n, k) * lx ** (n - k) * inner)
    terms = {
        "delta_main": sign * W * (lx**n * (L / 2 - mp.mpf(1) / 2 + mp.pi * 1j / 4) - D),
        "expsum_plain": sign * lx**n * (lx / 2 - mp.pi * 1j / 4) * W,
        "expsum_log": sign * (lx**n * W * LY / 2 - lx**n * W / 2),
        "mangoldt": -sign * mp.fsum(s_terms),
    }
    return _breakdown(ctx, terms, _rh_scale(T, n, mp), n=n, X=str(X), T=T, formula="integer-pre-binomial")


def general_sc_rhs(
    n: int, T, tables: LaurentTable, ctx: PrecisionContext = _DEFAULT_CTX, error_form: str = "rh"
) -> ExpansionBreakdown:
    """Main terms for sum_{0<gamma<=T} zeta^(n)(rho)."""
    _check_n(n)
    _need_tables(tables, n)
    mp = ctx.mp
    T, W = _height(T, ctx)
    L = mp.log(W)
    C, A = tables.C, tables.A
    sign = (-1) ** (n + 1)
    stieltjes = mp.fsum(
        comb(n, k) * (-1) ** k * factorial(k) * _stieltjes_weight(k, C, mp) * W * L ** (n - k)
        for k in range(n + 1)
    )
    terms = {
        "leading": sign * W * L ** (n + 1) / (n + 1),
        "stieltjes_sum": sign * stieltjes,
        "laurent_A": factorial(n) * A[n] * W,
    }
    return _breakdown(
        ctx, terms, _error_scale(T, n, mp, error_form), n=n, X="1/1", T=T, formula="general-sc", error_form=error_form
    )


def s_asymptotic(k: int, Y, tables: LaurentTable, ctx: PrecisionContext = _DEFAULT_CTX) -> ExpansionBreakdown:
    """Asymptotic main terms of S = (-1)^(k+1) sum_{mr<=Y} Lambda(r) log^k r."""
    if int(k) != k or k < 0:
        raise OutOfContract(f"k must be an integer >= 0, got {k}")
    _need_tables(tables, k)
    mp = ctx.mp
    Y = mp.mpf(Y)
    if Y < 2:
        raise OutOfContract(f"Y must be >= 2, got {Y}")
    LY = mp.log(Y)
    C, A = tables.C, tables.A
    sign = (-1) ** (k + 1)
    stieltjes = mp.fsum(
        comb(k, l) * (-1) ** l * factorial(l) * _stieltjes_weight(l, C, mp) * Y * LY ** (k - l) for l in range(k + 1)
    )
    terms = {
        "leading": sign * Y * LY ** (k + 1) / (k + 1),
        "stieltjes_sum": sign * stieltjes,
        "laurent_A": factorial(k) * A[k] * Y,
    }
    return _breakdown(ctx, terms, _rh_scale(Y, k, mp), n=k, Y=Y, formula="s-asym")


def fujii_shanks_rhs(T, tables: LaurentTable, ctx: PrecisionContext = _DEFAULT_CTX) -> ExpansionBreakdown:
    """Fujii's main terms for sum zeta'(rho), transcribed literally."""
    _need_tables(tables, 1)
    mp = ctx.mp
    T, W = _height(T, ctx)
    L = mp.log(W)
    C0, C1 = tables.C[0], tables.C[1]
    terms = {
        "leading": T / (4 * mp.pi) * L**2,
        "log_term": (-1 + C0) * W * L,
        "constant": (1 - C0 - C0**2 + 3 * C1) * W,
    }
    return _breakdown(ctx, terms, _rh_scale(T, 1, mp), n=1, X="1/1", T=T, formula="fujii2")


def fujii_integer_rhs(X, T, tables: LaurentTable, ctx: PrecisionContext = _DEFAULT_CTX) -> ExpansionBreakdown:
    """Fujii's main terms for sum zeta'(rho) X^rho with X a positive integer, transcribed literally."""
    _need_tables(tables, 1)
    X = _integer_x(X)
    mp = ctx.mp
    T, W = _height(T, ctx)
    L = mp.log(W)
    lx = X.log(ctx)
    C0, C1 = tables.C[0], tables.C[1]
    terms = {
        "leading": T / (4 * mp.pi) * L**2,
        "log_term": (-1 + C0 - lx) * W * L,
        "constant": W * (1 - C0 - C0**2 + 3 * C1 + conv_sum_at_X(1, X, ctx) - (C0 - 1 + lx / 2) * lx),
    }
    return _breakdown(ctx, terms, _rh_scale(T, 1, mp), n=1, X=str(X), T=T, formula="fujii4")


def landau_rhs(X, T, ctx: PrecisionContext = _DEFAULT_CTX):
    """Landau's main term -(T/2pi) Lambda(X); zero unless X is a prime power."""
    X = _as_x(X)
    mp = ctx.mp
    if X.fraction <= 1:
        raise OutOfContract(f"Landau's formula needs X > 1, got {X}")
    T, W = _height(T, ctx)
    lam = von_mangoldt(X.num, ctx) if X.is_integer else mp.zero
    return mp.mpc(-W * lam)
