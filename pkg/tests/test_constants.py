import mpmath
import pytest

from zetasum.constants import a_oracle, israilov_A, laurent_table, stieltjes_C
from zetasum.numkern import PrecisionContext, zeta, zeta_jet

CTX = PrecisionContext(40)
MP = CTX.mp


def euler_gamma_richardson(levels=12):
    """lim H_N - log N, Richardson-extrapolated over N = 8, 16, 32, ..."""
    with mpmath.workdps(60):
        prev = []
        for i in range(levels + 1):
            N = 8 * 2**i
            row = [mpmath.fsum(mpmath.mpf(1) / k for k in range(1, N + 1)) - mpmath.log(N)]
            for j in range(1, i + 1):
                row.append((2**j * row[j - 1] - prev[j - 1]) / (2**j - 1))
            prev = row
        return prev[-1]


def stieltjes_1_euler_maclaurin(N=100, terms=11):
    """lim sum_{k<=N} log k / k - log^2 N / 2, with the Euler-Maclaurin tail at N removed."""
    with mpmath.workdps(60):
        f = lambda x: mpmath.log(x) / x
        s = mpmath.fsum(f(k) for k in range(1, N + 1)) - mpmath.log(N) ** 2 / 2 - f(N) / 2
        for j in range(1, terms + 1):
            s -= mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * mpmath.diff(f, N, 2 * j - 1)
        return s


def test_c0_against_harmonic_limit():
    C = stieltjes_C(3, CTX)
    assert abs(C[0] - MP.mpf(euler_gamma_richardson())) < MP.mpf(10) ** -35


def test_c1_against_log_harmonic_limit():
    # C_1 = -gamma_1, and the limit above is gamma_1 = -0.0728158...
    C = stieltjes_C(3, CTX)
    gamma_1 = MP.mpf(stieltjes_1_euler_maclaurin())
    assert abs(C[1] + gamma_1) < MP.mpf(10) ** -38
    assert C[1] > 0


def test_laurent_reconstruction():
    C = stieltjes_C(10, CTX)
    s = MP.mpf("1.1")
    series = 1 / (s - 1) + MP.fsum(c * (s - 1) ** j for j, c in enumerate(C))
    assert abs(series - zeta(s, CTX)) < MP.mpf(10) ** -10


def test_israilov_low_orders():
    C = stieltjes_C(4, CTX)
    A = israilov_A(C, 4)
    assert A[0] == C[0]
    assert abs(A[1] - (2 * C[1] - C[0] ** 2)) < MP.mpf(10) ** -45
    assert abs(A[2] - (3 * C[2] - A[0] * C[1] - A[1] * C[0])) < MP.mpf(10) ** -45
    with pytest.raises(ValueError):
        israilov_A(C, 9)


def test_recursion_against_oracle():
    A = israilov_A(stieltjes_C(8, CTX), 8)
    B = a_oracle(8, CTX)
    for a, b in zip(A, B):
        assert abs(a - b) < MP.mpf(10) ** (-CTX.digits + 8)


def test_a0_equals_c0_and_pole_cancels():
    assert abs(a_oracle(0, CTX)[0] - stieltjes_C(0, CTX)[0]) < MP.mpf(10) ** -40
    s = 1 + MP.mpf("1e-6")
    z0, z1 = zeta_jet(s, 1, CTX)
    regular = z1 / z0 + 1 / (s - 1)
    assert abs(regular - a_oracle(0, CTX)[0]) < MP.mpf(10) ** -5


def test_radius_independence():
    a = stieltjes_C(8, CTX, radius="0.5")
    b = stieltjes_C(8, CTX, radius="0.25")
    for x, y in zip(a, b):
        assert abs(x - y) < MP.mpf(10) ** (-CTX.digits + 8)
    a = a_oracle(6, CTX, radius="0.5")
    b = a_oracle(6, CTX, radius="0.25")
    for x, y in zip(a, b):
        assert abs(x - y) < MP.mpf(10) ** (-CTX.digits + 8)


def test_stable_under_more_digits():
    fine = PrecisionContext(CTX.digits + 10)
    for x, y in zip(stieltjes_C(12, CTX), stieltjes_C(12, fine)):
        assert abs(x - y) < MP.mpf(10) ** (-CTX.digits + 3)


def test_table_is_cached_and_bounded():
    assert laurent_table(6, CTX) is laurent_table(6, CTX)
    t = laurent_table(6, CTX)
    assert len(t.C) == len(t.A) == 7 and t.digits == 40
    with pytest.raises(ValueError):
        stieltjes_C(21, CTX)
