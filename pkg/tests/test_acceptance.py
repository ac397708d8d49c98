"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one PASS/FAIL line; the same lines are repeated in the
terminal summary under "acceptance criteria".
"""

import math
import random
import time

import mpmath

from zetasum.arith import RationalX, s_direct
from zetasum.constants import a_oracle, israilov_A, stieltjes_C
from zetasum.expansions import (
    _corollary_pre_binomial,
    corollary_integer_rhs,
    explicit2_rhs,
    fujii_integer_rhs,
    fujii_shanks_rhs,
    general_sc_rhs,
    s_asymptotic,
    theorem1_rhs,
)
from zetasum.numkern import functional_equation_residual, zeta
from zetasum.zeros import find_zeros
from zetasum.zerosum import compare, landau_lhs, lhs_zero_sum


def bisection_first_zero(dps=60):
    """First sign change of mpmath's Hardy Z on [14, 14.5], bisected at ``dps`` digits."""
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(14), mpmath.mpf("14.5")
        fa = mpmath.siegelz(a)
        for _ in range(210):
            m = (a + b) / 2
            fm = mpmath.siegelz(m)
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        return (a + b) / 2


def harmonic_gamma_oracle(levels=12):
    with mpmath.workdps(60):
        prev = []
        for i in range(levels + 1):
            N = 8 * 2**i
            row = [mpmath.fsum(mpmath.mpf(1) / k for k in range(1, N + 1)) - mpmath.log(N)]
            for j in range(1, i + 1):
                row.append((2**j * row[j - 1] - prev[j - 1]) / (2**j - 1))
            prev = row
        return prev[-1]


def rel(mp, a, b):
    return abs(a - b) / max(abs(a), abs(b), 1)


def test_c1_zero_pipeline(ctx, record):
    mp = ctx.mp
    start = time.perf_counter()
    table = find_zeros(100, ctx)
    gammas = table.gammas(ctx)
    worst = max(abs(zeta(mp.mpc(0.5, g), ctx)) for g in gammas)
    elapsed = time.perf_counter() - start
    first_err = abs(gammas[0] - mp.mpf(bisection_first_zero()))
    ok = len(gammas) == 29 and worst < 1e-30 and first_err < 1e-35 and elapsed < 120
    record(
        "C1 zero pipeline",
        ok,
        f"{len(gammas)} zeros, max|zeta|={mp.nstr(worst, 3)}, first err={mp.nstr(first_err, 3)}, {elapsed:.1f}s",
    )
    assert ok


def test_c2_landau(ctx, zeros_1005, record):
    mp = ctx.mp
    table, find_time = zeros_1005
    start = time.perf_counter()
    diffs = []
    for T in (250, 500, 1000):
        expected = -mp.mpf(T) / (2 * mp.pi) * mp.log(2)
        diffs.append((T, abs(landau_lhs(2, T, table, ctx) - expected)))
    elapsed = find_time + time.perf_counter() - start
    ok = all(d <= 10 * math.log(T) for T, d in diffs) and elapsed < 300 and table.count_upto(1000) == 649
    detail = ", ".join(f"T={T}: {float(d):.3f} <= {10 * math.log(T):.1f}" for T, d in diffs)
    record("C2 Landau X=2", ok, f"{detail}, {elapsed:.1f}s with zero finding")
    assert ok


def test_c3_theorem1_envelope(ctx, table, record):
    cases = [(1, "2"), (2, "2"), (1, "3"), (2, "5/2"), (3, "1")]
    results = {(n, X): compare(n, X, [100, 250, 500, 1000], "theorem1", table, ctx=ctx) for n, X in cases}
    c_hat = max(r.c_hat for r in results.values())
    growth = max(r.growth for r in results.values())
    ok = c_hat <= 1 and growth <= 2
    record("C3 residual envelope", ok, f"c_hat={c_hat:.3g}, worst growth 100->1000 = {growth:.3g}")
    assert ok


def test_c4_identities(ctx, tables, record):
    mp = ctx.mp
    tol = mp.mpf(10) ** (-ctx.digits + 8)
    start = time.perf_counter()
    rng = random.Random(2024)
    worst = {}

    errs = []
    for _ in range(20):
        n, X, T = rng.randint(1, 5), RationalX(rng.randint(1, 30), rng.randint(1, 8)), rng.uniform(200, 5000)
        if T < 2 * math.pi * float(X.fraction):
            T = 2 * math.pi * float(X.fraction) + 1
        errs.append(rel(mp, theorem1_rhs(n, X, T, ctx).total, explicit2_rhs(n, X, T, ctx).total))
    worst["theorem1=explicit2"] = max(errs)

    errs = []
    for _ in range(10):
        n, X, T = rng.randint(1, 6), rng.randint(2, 40), rng.uniform(300, 5000)
        a = corollary_integer_rhs(n, X, T, tables, ctx).total
        errs.append(rel(mp, a, _corollary_pre_binomial(n, X, T, tables, ctx).total))
    worst["integer=pre-binomial"] = max(errs)

    C0, C1 = tables.C[0], tables.C[1]
    errs = []
    for T in (100, 1000, 10**4, 10**6):
        W = mp.mpf(T) / (2 * mp.pi)
        L = mp.log(W)
        expected = W * (L**2 / 2 + (-1 + C0) * L + (1 - C0 - C0**2 + 3 * C1))
        errs.append(rel(mp, general_sc_rhs(1, T, tables, ctx).total, expected))
    worst["general-sc triple"] = max(errs)

    errs = [rel(mp, fujii_integer_rhs(1, T, tables, ctx).total, fujii_shanks_rhs(T, tables, ctx).total) for T in (100, 1000, 12345)]
    worst["fujii4(1)=fujii2"] = max(errs)

    elapsed = time.perf_counter() - start
    ok = all(e < tol for e in worst.values()) and elapsed < 60
    record("C4 identity suite", ok, ", ".join(f"{k} {mp.nstr(v, 3)}" for k, v in worst.items()) + f", {elapsed:.1f}s")
    assert ok


def test_c5_constants(ctx, record):
    mp = ctx.mp
    start = time.perf_counter()
    c0_err = abs(stieltjes_C(0, ctx)[0] - mp.mpf(harmonic_gamma_oracle()))
    A = israilov_A(stieltjes_C(5, ctx), 5)
    B = a_oracle(5, ctx)
    a_err = max(abs(a - b) / max(abs(b), 1) for a, b in zip(A, B))
    elapsed = time.perf_counter() - start
    ok = c0_err < 1e-25 and a_err < 1e-20 and elapsed < 60
    record("C5 constants", ok, f"C_0 err={mp.nstr(c0_err, 3)}, A_j err (j<=5)={mp.nstr(a_err, 3)}, {elapsed:.1f}s")
    assert ok


def test_c6_functional_equation(ctx, record):
    mp = ctx.mp
    rng = random.Random(6)
    points = [mp.mpc(rng.uniform(0.05, 0.95), rng.uniform(-40, 40)) for _ in range(20)]
    worst = max(functional_equation_residual(n, s, ctx) for n in range(5) for s in points)
    ok = worst < 1e-30
    record("C6 functional equation", ok, f"max residual over n<=4, 20 points = {mp.nstr(worst, 3)}")
    assert ok


def test_c7_s_sum(ctx, tables, record):
    mp = ctx.mp
    start = time.perf_counter()
    errs = {}
    for k in range(3):
        errs[k] = []
        for Y in (10**4, 10**5):
            direct = (-1) ** (k + 1) * s_direct(k, Y, ctx)
            approx = s_asymptotic(k, Y, tables, ctx).total.real
            errs[k].append(float(abs(approx - direct) / abs(direct)))
    elapsed = time.perf_counter() - start
    ok = all(e[1] < 0.05 and e[0] < 0.05 and e[1] < e[0] for e in errs.values()) and elapsed < 180
    detail = ", ".join(f"k={k}: {e[0]:.2e} -> {e[1]:.2e}" for k, e in errs.items())
    record("C7 S-sum asymptotic", ok, f"{detail}, {elapsed:.1f}s")
    assert ok


def test_c8_n0_vanishing(ctx, table, record):
    mp = ctx.mp
    values = {X: abs(lhs_zero_sum(0, X, 1000, table, ctx)) for X in ("1", "2", "7/2")}
    ok = all(v < mp.mpf(10) ** -25 * mp.sqrt(mp.mpmathify(X)) for X, v in values.items())
    record("C8 n=0 vanishing", ok, ", ".join(f"X={X}: {mp.nstr(v, 3)}" for X, v in values.items()))
    assert ok
