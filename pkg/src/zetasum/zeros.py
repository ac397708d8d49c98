"""Tables of zeta-zero ordinates: search, counting certificate, file I/O.

Zeros are located as sign changes of Hardy's Z between Gram points
(double precision, with dyadic subdivision when Gram's law fails), then
polished by Newton's method on Z at the working precision.  Completeness
is certified against N(T) = theta(T)/pi + 1 + arg zeta(1/2+iT)/pi, the
argument being tracked continuously along the horizontal segment from
3 + iT.

Every ordinate is taken to have real part 1/2.
"""

from __future__ import annotations

import bisect
import io
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, TextIO

import numpy as np
from scipy.optimize import brentq

from . import _fast
from .errors import (
    AmbiguousCount,
    InsufficientTable,
    MalformedLine,
    MissedZero,
    NotAscending,
    PrecisionUnachievable,
    VerificationFailed,
)
from .numkern import (
    PrecisionContext,
    hardy_Z,
    riemann_siegel_theta_derivative,
    zeta,
    zeta_jet,
)

logger = logging.getLogger(__name__)

__all__ = [
    "ZeroTable",
    "find_zeros",
    "count_zeros_rvm",
    "import_zeros",
    "export_zeros",
    "safe_truncation_height",
]

SCAN_START = 10.0  # below the first ordinate, above the minimum of theta
MAX_SUBDIVISION_LEVEL = 6


@dataclass(frozen=True)
class ZeroTable:
    """Ascending ordinates gamma of zeros 1/2 + i*gamma, stored as decimal strings."""

    ordinates: tuple[str, ...]
    verified_height: float
    source: str  # "computed" | "imported"
    precision_digits: int
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.ordinates)

    @property
    def decimals(self) -> list[Decimal]:
        if "dec" not in self._cache:
            self._cache["dec"] = [Decimal(g) for g in self.ordinates]
        return self._cache["dec"]

    @property
    def floats(self) -> np.ndarray:
        if "flt" not in self._cache:
            self._cache["flt"] = np.array([float(g) for g in self.ordinates])
        return self._cache["flt"]

    def gammas(self, ctx: PrecisionContext) -> list:
        key = ("mp", ctx.dps)
        if key not in self._cache:
            self._cache[key] = [ctx.mp.mpf(g) for g in self.ordinates]
        return self._cache[key]

    def count_upto(self, T) -> int:
        """Number of ordinates <= T (exact decimal comparison)."""
        key = Decimal(T) if isinstance(T, (int, float, str, Decimal)) else Decimal(str(T))
        return bisect.bisect_right(self.decimals, key)

    def truncated(self, T) -> "ZeroTable":
        k = self.count_upto(T)
        return ZeroTable(self.ordinates[:k], min(float(T), self.verified_height), self.source, self.precision_digits)


# --------------------------------------------------------------------------
# counting


def count_zeros_rvm(T, ctx: PrecisionContext | None = None) -> int:
    """Exact number of zeros with 0 < gamma <= T.

    The count is an integer, so double precision suffices; ``ctx`` is
    accepted for interface symmetry.  Raises AmbiguousCount when T sits
    (numerically) on an ordinate or the argument cannot be tracked.
    """
    T = float(T)
    if T < 2:
        raise ValueError(f"count_zeros_rvm needs T >= 2, got {T}")
    for npts in (65, 257, 1025, 4097, 16385):
        sig = np.linspace(3.0, 0.5, npts)
        z = _fast.zeta(sig + 1j * T)
        if abs(z[-1]) < 1e-9:
            raise AmbiguousCount(f"T = {T} is numerically an ordinate (|zeta| = {abs(z[-1]):.2e})")
        steps = np.angle(z[1:] / z[:-1])
        if np.max(np.abs(steps)) < math.pi / 4:
            break
    else:
        raise AmbiguousCount(f"argument of zeta(s + {T}i) could not be tracked")
    arg = math.atan2(z[0].imag, z[0].real) + math.fsum(steps)
    estimate = float(_fast.theta(T)) / math.pi + 1 + arg / math.pi
    n = round(estimate)
    if abs(estimate - n) > 0.1:
        raise AmbiguousCount(f"N({T}) evaluates to non-integer {estimate:.6f}")
    return int(n)


# --------------------------------------------------------------------------
# search


def _scan_brackets(t_max: float, target: int) -> list[tuple[float, float]]:
    knots = np.concatenate(([SCAN_START], _fast.gram_points(SCAN_START, t_max), [t_max]))
    found = 0
    for level in range(MAX_SUBDIVISION_LEVEL + 1):
        parts = 2**level
        frac = np.arange(parts) / parts
        grid = (knots[:-1, None] + np.diff(knots)[:, None] * frac[None, :]).ravel()
        grid = np.append(grid, knots[-1])
        z = _fast.hardy_z(grid)
        idx = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
        found = len(idx)
        if found == target:
            if level:
                logger.debug("Gram-interval subdivision level %d needed below %g", level, t_max)
            return [(float(grid[i]), float(grid[i + 1])) for i in idx]
        if found > target:
            break
    raise MissedZero(f"found {found} sign changes of Z below {t_max}, expected {target}")


def _polish(args) -> str:
    a, b, digits, guard = args
    ctx = PrecisionContext(digits, guard)
    mp = ctx.mp
    g0 = brentq(lambda t: float(_fast.hardy_z(t)[0]), a, b, xtol=1e-13, rtol=1e-15)
    lo, hi = mp.mpf(a), mp.mpf(b)
    g = mp.mpf(g0)
    tol = mp.mpf(10) ** (-(ctx.dps - 3)) * max(1, abs(g))
    for _ in range(10):
        z0, z1 = zeta_jet(mp.mpc(0.5, g), 1, ctx)
        dth = riemann_siegel_theta_derivative(g, ctx)
        step = (z0 / (mp.mpc(0, 1) * (dth * z0 + z1))).real
        g -= step
        if not lo < g < hi:
            g = _bisect_polish(lo, hi, ctx)
            break
        if abs(step) < tol:
            break
    else:
        raise PrecisionUnachievable(f"Newton iteration stalled near {g0}")
    return mp.nstr(g, digits + int(math.log10(max(1.0, float(g)))) + 1, strip_zeros=False)


def _bisect_polish(lo, hi, ctx: PrecisionContext):
    """Illinois regula falsi on Z; fallback when Newton leaves the bracket."""
    mp = ctx.mp
    flo, fhi = hardy_Z(lo, ctx), hardy_Z(hi, ctx)
    tol = mp.mpf(10) ** (-(ctx.dps - 3)) * max(1, abs(hi))
    side = 0
    for _ in range(40 * ctx.dps):
        mid = (lo * fhi - hi * flo) / (fhi - flo)
        fm = hardy_Z(mid, ctx)
        if fm * fhi < 0:
            lo, flo = hi, fhi
            hi, fhi = mid, fm
            side = 0
        else:
            hi, fhi = mid, fm
            flo /= 2 if side else 1
            side = 1
        if abs(hi - lo) < tol:
            return mid
    raise PrecisionUnachievable("bracketed root refinement did not converge")


def find_zeros(t_max, ctx: PrecisionContext, workers: int = 1) -> ZeroTable:
    """All ordinates in (0, t_max], polished to ``ctx.digits`` significant digits.

    ``workers > 1`` polishes brackets in a process pool; output does not
    depend on the worker count.
    """
    t_max = float(t_max)
    if t_max < SCAN_START:
        return ZeroTable((), t_max, "computed", ctx.digits)
    target = count_zeros_rvm(t_max)
    if target == 0:
        return ZeroTable((), t_max, "computed", ctx.digits)
    brackets = _scan_brackets(t_max, target)
    jobs = [(a, b, ctx.digits, ctx.guard_digits) for a, b in brackets]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            ordinates = list(pool.map(_polish, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        ordinates = [_polish(j) for j in jobs]
    return ZeroTable(tuple(ordinates), t_max, "computed", ctx.digits)


# --------------------------------------------------------------------------
# file format

_ORDINATE_RE = re.compile(r"^\d+(\.\d+)?$")


def _significant_digits(text: str) -> int:
    return len(text.replace(".", "").lstrip("0"))


def _lines(stream) -> Iterable[str]:
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def import_zeros(stream: TextIO | str, ctx: PrecisionContext | None = None, trust: bool = False) -> ZeroTable:
    """Parse a one-ordinate-per-line table ('#' comments allowed).

    Unless ``trust`` is set every ordinate is re-checked with
    ``|zeta(1/2 + i gamma)| < 10^(-p + 8)`` (``p`` the smallest number of
    significant digits in the file) and completeness is certified by the
    zero count just above the last ordinate.
    """
    ordinates: list[str] = []
    last: Decimal | None = None
    for line_no, raw in enumerate(_lines(stream), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if not _ORDINATE_RE.match(text):
            raise MalformedLine(line_no, f"not a positive decimal ordinate: {text!r}")
        value = Decimal(text)
        if value <= 0:
            raise MalformedLine(line_no, "ordinates must be positive")
        if last is not None and value <= last:
            raise NotAscending(line_no, f"{text} does not exceed the previous ordinate")
        ordinates.append(text)
        last = value
    if not ordinates:
        return ZeroTable((), 0.0, "imported", ctx.digits if ctx else 15)
    precision = min(_significant_digits(g) for g in ordinates)
    if trust:
        return ZeroTable(tuple(ordinates), float(ordinates[-1]), "imported", precision)
    return ZeroTable(tuple(ordinates), _verify(ordinates, precision, ctx), "imported", precision)


def _verify(ordinates: list[str], precision: int, ctx: PrecisionContext | None) -> float:
    vctx = ctx or PrecisionContext(max(15, precision + 5))
    mp = vctx.mp
    bound = mp.mpf(10) ** (-precision + 8)
    for g in ordinates:
        val = abs(zeta(mp.mpc(mp.mpf("0.5"), mp.mpf(g)), vctx))
        if not val < bound:
            raise VerificationFailed(g, f"|zeta| = {mp.nstr(val, 3)} >= {mp.nstr(bound, 3)}")
    top = float(ordinates[-1])
    for delta in (0.5 / math.log(max(top, 3.0)), 0.05, 0.01):
        try:
            n = count_zeros_rvm(top + delta)
        except AmbiguousCount:
            continue
        if n == len(ordinates):
            return top + delta
        if n < len(ordinates):
            raise VerificationFailed(ordinates[-1], f"table lists {len(ordinates)} zeros but N = {n}")
    raise VerificationFailed(ordinates[-1], "zero count just above the table exceeds its length (incomplete table)")


def export_zeros(table: ZeroTable, stream: TextIO | None = None) -> str:
    """Serialize ``table``; also written to ``stream`` when given."""
    header = (
        f"# zetasum zero table: source={table.source} count={len(table)} "
        f"verified_height={table.verified_height!r} precision_digits={table.precision_digits}\n"
    )
    text = header + "".join(g + "\n" for g in table.ordinates)
    if stream is not None:
        stream.write(text)
    return text


# --------------------------------------------------------------------------


def safe_truncation_height(T, table: ZeroTable) -> float:
    """Move T off any ordinate closer than 1/(2 log T).

    Returns T when it is far enough from every ordinate, otherwise the
    midpoint of the ordinates bracketing T (an ordinate equal to T counts
    as lying below it).
    """
    T = float(T)
    if table.verified_height < T + 1:
        raise InsufficientTable(f"table verified to {table.verified_height}, need >= {T + 1}")
    g = table.floats
    if len(g) == 0:
        return T
    gap = 1 / (2 * math.log(T))
    if np.min(np.abs(g - T)) > gap:
        return T
    k = table.count_upto(T)
    lo = float(g[k - 1]) if k > 0 else 0.0
    hi = float(g[k]) if k < len(g) else table.verified_height
    mid = (lo + hi) / 2
    if (hi - lo) / 2 <= 1 / (2 * math.log(mid)):
        logger.warning("ordinates near T = %g are too close to satisfy the gap condition", T)
    return mid
