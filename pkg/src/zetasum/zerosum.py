"""Sums over zeta zeros and their comparison with the explicit formulae.

Every zero is taken on the critical line, rho = 1/2 + i*gamma, which holds
for all ordinates a desk-scale table can contain.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import expansions
from .arith import _as_x
from .constants import LaurentTable
from .errors import InsufficientTable, OutOfContract
from .numkern import PrecisionContext, zeta_jet
from .zeros import ZeroTable, safe_truncation_height

logger = logging.getLogger(__name__)

__all__ = ["ComparisonReport", "Comparison", "lhs_zero_sum", "landau_lhs", "compare", "FORMULAS"]

_DEFAULT_CTX = PrecisionContext()
# jets are computed at least to this order so one pass serves small n
_MIN_JET_ORDER = 4
_BLOCK = 32

FORMULAS = ("theorem1", "explicit2", "fujii3", "integer", "general-sc", "fujii2", "fujii4", "landau")


def _jet_block(args):
    ordinates, order, digits, guard = args
    ctx = PrecisionContext(digits, guard)
    mp = ctx.mp
    half = mp.mpf("0.5")
    out = []
    for g in ordinates:
        jet = zeta_jet(mp.mpc(half, mp.mpf(g)), order, ctx)
        out.append([(v.real._mpf_, v.imag._mpf_) for v in jet])
    return out


def _derivatives(table: ZeroTable, n: int, ctx: PrecisionContext, workers: int = 1) -> list:
    """zeta^(n)(1/2 + i gamma) for every ordinate, cached on the table."""
    key = ("jets", ctx.digits, ctx.guard_digits)
    cached = table._cache.get(key)
    if cached is None or cached[0] < n:
        order = max(n, _MIN_JET_ORDER)
        blocks = [table.ordinates[i : i + _BLOCK] for i in range(0, len(table), _BLOCK)]
        jobs = [(b, order, ctx.digits, ctx.guard_digits) for b in blocks]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_jet_block, jobs))
        else:
            parts = [_jet_block(j) for j in jobs]
        mp = ctx.mp
        jets = [[mp.make_mpc(v) for v in jet] for part in parts for jet in part]
        cached = (order, jets)
        table._cache[key] = cached
    return [jet[n] for jet in cached[1]]


def _window(table: ZeroTable, T, lower) -> tuple[int, int]:
    if table.verified_height < float(T):
        raise InsufficientTable(f"table verified to {table.verified_height}, need >= {T}")
    return table.count_upto(lower), table.count_upto(T)


def lhs_zero_sum(
    n: int,
    X,
    T,
    table: ZeroTable,
    ctx: PrecisionContext = _DEFAULT_CTX,
    workers: int = 1,
    lower=0,
):
    """sum_{lower < gamma <= T} zeta^(n)(rho) X^rho, summed in ascending gamma."""
    if int(n) != n or n < 0:
        raise OutOfContract(f"n must be an integer >= 0, got {n}")
    X = _as_x(X)
    mp = ctx.mp
    i, j = _window(table, T, lower)
    if i >= j:
        return mp.mpc(0)
    derivs = _derivatives(table, n, ctx, workers)
    gammas = table.gammas(ctx)
    sqrt_x = mp.sqrt(X.value(ctx))
    log_x = X.log(ctx)
    return mp.fsum(derivs[k] * mp.expj(gammas[k] * log_x) for k in range(i, j)) * sqrt_x


def landau_lhs(X, T, table: ZeroTable, ctx: PrecisionContext = _DEFAULT_CTX):
    """sum_{0 < gamma <= T} X^rho."""
    X = _as_x(X)
    mp = ctx.mp
    _, j = _window(table, T, 0)
    gammas = table.gammas(ctx)
    log_x = X.log(ctx)
    return mp.fsum(mp.expj(gammas[k] * log_x) for k in range(j)) * mp.sqrt(X.value(ctx))


# --------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class ComparisonReport:
    lhs: object
    rhs: object
    residual: object
    normalized_residual: float
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Comparison:
    """Reports along a T grid, plus the fitted constant and trend of the normalized residuals."""

    reports: tuple
    c_hat: float
    growth: float  # last / first normalized residual
    monotone: bool  # normalized residual never increases along the grid

    def __iter__(self):
        return iter(self.reports)

    def __len__(self):
        return len(self.reports)

    def __getitem__(self, i):
        return self.reports[i]


def _rhs(formula, n, X, T, tables, ctx):
    mp = ctx.mp
    if formula == "theorem1":
        return expansions.theorem1_rhs(n, X, T, ctx)
    if formula == "explicit2":
        return expansions.explicit2_rhs(n, X, T, ctx)
    if formula == "fujii3":
        _need_n(formula, n, 1)
        return expansions.fujii3_rhs(X, T, ctx)
    if formula == "integer":
        return expansions.corollary_integer_rhs(n, X, T, tables, ctx)
    if formula == "general-sc":
        _need_x1(formula, X)
        return expansions.general_sc_rhs(n, T, tables, ctx)
    if formula == "fujii2":
        _need_n(formula, n, 1)
        _need_x1(formula, X)
        return expansions.fujii_shanks_rhs(T, tables, ctx)
    if formula == "fujii4":
        _need_n(formula, n, 1)
        return expansions.fujii_integer_rhs(X, T, tables, ctx)
    if formula == "landau":
        T = mp.mpf(T)
        value = expansions.landau_rhs(X, T, ctx)
        return expansions.ExpansionBreakdown({"landau": value}, value, mp.log(T), {"formula": "landau"})
    raise ValueError(f"unknown formula {formula!r}; expected one of {FORMULAS}")


def _need_n(formula, n, want):
    if n != want:
        raise OutOfContract(f"formula {formula} is stated for n = {want} only")


def _need_x1(formula, X):
    if X.fraction != 1:
        raise OutOfContract(f"formula {formula} is stated for X = 1 only")


def compare(
    n: int,
    X,
    T_grid,
    formula: str,
    table: ZeroTable,
    tables: LaurentTable | None = None,
    ctx: PrecisionContext = _DEFAULT_CTX,
    workers: int = 1,
) -> Comparison:
    """Evaluate lhs - rhs along ``T_grid``; each T is first moved off nearby ordinates."""
    X = _as_x(X)
    grid = [float(T) for T in T_grid]
    if not grid:
        raise ValueError("T_grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("T_grid must be strictly ascending")
    if formula not in FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; expected one of {FORMULAS}")
    mp = ctx.mp
    reports = []
    for T in grid:
        T_eff = safe_truncation_height(T, table)
        if T_eff != T:
            logger.info("T = %g moved to %r to keep clear of an ordinate", T, T_eff)
        if formula == "landau":
            lhs = landau_lhs(X, T_eff, table, ctx)
        else:
            lhs = lhs_zero_sum(n, X, T_eff, table, ctx, workers)
        rhs = _rhs(formula, n, X, T_eff, tables, ctx)
        residual = lhs - rhs.total
        reports.append(
            ComparisonReport(
                lhs=lhs,
                rhs=rhs.total,
                residual=residual,
                normalized_residual=float(abs(residual) / rhs.error_scale),
                meta={
                    "n": n,
                    "X": str(X),
                    "T": T,
                    "effective_T": T_eff,
                    "zero_count": table.count_upto(T_eff),
                    "formula": formula,
                    "digits": ctx.digits,
                },
            )
        )
    norms = [r.normalized_residual for r in reports]
    growth = norms[-1] / norms[0] if norms[0] > 0 else float("inf")
    monotone = all(b <= a for a, b in zip(norms, norms[1:]))
    return Comparison(tuple(reports), max(norms), growth, monotone)
