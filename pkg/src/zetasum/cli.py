"""Command-line entry point: ``zetasum <command> [options]``.

Exit status is 0 on success, 2 on a usage error and 1 when a computation
fails (the message goes to stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys
from dataclasses import dataclass

from .arith import RationalX
from .constants import a_oracle, israilov_A, laurent_table, stieltjes_C
from .errors import ZetasumError
from .expansions import (
    ExpansionBreakdown,
    _corollary_pre_binomial,
    corollary_integer_rhs,
    explicit2_rhs,
    fujii3_rhs,
    fujii_integer_rhs,
    fujii_shanks_rhs,
    general_sc_rhs,
    landau_rhs,
    s_asymptotic,
    theorem1_rhs,
)
from .numkern import PrecisionContext, functional_equation_residual
from .zeros import export_zeros, find_zeros, import_zeros
from .zerosum import FORMULAS, compare, lhs_zero_sum

logger = logging.getLogger("zetasum")

DEFAULT_DIGITS = 40
RHS_FORMULAS = ("theorem1", "explicit2", "fujii3", "integer", "general-sc", "fujii2", "fujii4", "landau", "s-asym")
COMPARE_COLUMNS = ["T_effective", "zero_count", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "resid_abs", "resid_norm"]


@dataclass(frozen=True)
class RunConfig:
    digits: int = DEFAULT_DIGITS
    zeros_path: str | None = None
    trust_imported: bool = False
    output_format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError(f"digits must be >= 15, got {self.digits}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"output format must be csv or json, got {self.output_format!r}")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)


# --------------------------------------------------------------------------
# argument types


def _x_arg(text: str) -> RationalX:
    try:
        return RationalX.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _height_arg(text: str) -> str:
    try:
        if not float(text) > 0:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    return text


def _grid_arg(text: str) -> list[str]:
    return [_height_arg(part.strip()) for part in text.split(",") if part.strip()]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _default_digits() -> int:
    raw = os.environ.get("ZETASUM_DIGITS")
    if raw is None:
        return DEFAULT_DIGITS
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"zetasum: ZETASUM_DIGITS must be an integer, got {raw!r}") from None


# --------------------------------------------------------------------------
# output


class _Writer:
    def __init__(self, cfg: RunConfig, out_path: str | None):
        self.cfg = cfg
        self.out_path = out_path

    def fmt(self, x) -> str:
        # mpmath formats with '.' regardless of locale
        return self.cfg.ctx.mp.nstr(x, self.cfg.digits, strip_zeros=False)

    def emit(self, columns: list[str], rows: list[list], meta: dict):
        if self.cfg.output_format == "json":
            payload = {"meta": meta, "columns": columns, "rows": [dict(zip(columns, r)) for r in rows]}
            text = json.dumps(payload, indent=2) + "\n"
        else:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
            text = buf.getvalue()
        self.write_text(text)

    def write_text(self, text: str):
        if self.out_path:
            with open(self.out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _load_table(cfg: RunConfig, T):
    """Zero table from --zeros, or computed slightly beyond T."""
    ctx = cfg.ctx
    if cfg.zeros_path:
        with open(cfg.zeros_path, encoding="utf-8") as fh:
            return import_zeros(fh, ctx, trust=cfg.trust_imported)
    return find_zeros(float(T) + 2, ctx, workers=cfg.threads)


# --------------------------------------------------------------------------
# commands


def _cmd_zeros(args, cfg: RunConfig):
    ctx = cfg.ctx
    w = _Writer(cfg, args.out)
    if args.zeros_command == "find":
        w.write_text(export_zeros(find_zeros(float(args.T), ctx, workers=cfg.threads)))
    elif args.zeros_command == "import":
        with open(args.file, encoding="utf-8") as fh:
            table = import_zeros(fh, ctx, trust=cfg.trust_imported)
        w.emit(
            ["count", "verified_height", "precision_digits"],
            [[len(table), repr(table.verified_height), table.precision_digits]],
            {"source": args.file, "trusted": cfg.trust_imported},
        )
    else:
        if cfg.zeros_path:
            table = _load_table(cfg, 0)
            if args.T is not None:
                table = table.truncated(float(args.T))
        elif args.T is not None:
            table = find_zeros(float(args.T), ctx, workers=cfg.threads)
        else:
            raise _UsageError("zeros export needs --zeros FILE or --T T")
        w.write_text(export_zeros(table))


def _cmd_constants(args, cfg: RunConfig):
    ctx = cfg.ctx
    C = stieltjes_C(args.jmax, ctx)
    A = israilov_A(C, args.jmax)
    w = _Writer(cfg, args.out)
    rows = [[j, w.fmt(C[j]), w.fmt(A[j])] for j in range(args.jmax + 1)]
    w.emit(["j", "C_j", "A_j"], rows, {"jmax": args.jmax, "digits": cfg.digits})


def _breakdown_for(args, cfg: RunConfig):
    ctx = cfg.ctx
    f, n, X = args.formula, args.n, args.X
    needs_tables = f in ("integer", "general-sc", "fujii2", "fujii4", "s-asym")
    tables = laurent_table(max(n, 1), ctx) if needs_tables else None
    if f == "s-asym":
        Y = args.Y if args.Y is not None else args.T
        if Y is None:
            raise _UsageError("s-asym needs --Y (or --T)")
        return s_asymptotic(n, Y, tables, ctx)
    if args.T is None:
        raise _UsageError(f"formula {f} needs --T")
    T = args.T
    if f == "theorem1":
        return theorem1_rhs(n, X, T, ctx)
    if f == "explicit2":
        return explicit2_rhs(n, X, T, ctx)
    if f == "fujii3":
        return fujii3_rhs(X, T, ctx)
    if f == "integer":
        return corollary_integer_rhs(n, X, T, tables, ctx, error_form=args.error_form)
    if f == "general-sc":
        return general_sc_rhs(n, T, tables, ctx, error_form=args.error_form)
    if f == "fujii2":
        return fujii_shanks_rhs(T, tables, ctx)
    if f == "fujii4":
        return fujii_integer_rhs(X, T, tables, ctx)
    value = landau_rhs(X, T, ctx)
    mp = ctx.mp
    return ExpansionBreakdown({"landau": value}, value, mp.log(mp.mpf(T)), {"formula": "landau", "X": str(X), "T": T})


def _cmd_rhs(args, cfg: RunConfig):
    b = _breakdown_for(args, cfg)
    w = _Writer(cfg, args.out)
    rows = [[label, w.fmt(v.real), w.fmt(v.imag)] for label, v in b.terms.items()]
    rows.append(["total", w.fmt(b.total.real), w.fmt(b.total.imag)])
    meta = {k: (w.fmt(v) if hasattr(v, "_mpf_") else v) for k, v in b.meta.items()}
    meta["error_scale"] = w.fmt(b.error_scale)
    meta["formula"] = args.formula
    w.emit(["term", "re", "im"], rows, meta)


def _cmd_lhs(args, cfg: RunConfig):
    ctx = cfg.ctx
    table = _load_table(cfg, args.T)
    value = lhs_zero_sum(args.n, args.X, args.T, table, ctx, workers=cfg.threads)
    w = _Writer(cfg, args.out)
    w.emit(
        ["T", "zero_count", "lhs_re", "lhs_im"],
        [[args.T, table.count_upto(args.T), w.fmt(value.real), w.fmt(value.imag)]],
        {"n": args.n, "X": str(args.X), "digits": cfg.digits},
    )


def _cmd_compare(args, cfg: RunConfig):
    ctx = cfg.ctx
    grid = args.Tgrid
    if not grid:
        raise _UsageError("--Tgrid is empty")
    table = _load_table(cfg, max(float(t) for t in grid) + 1)
    tables = laurent_table(max(args.n, 1), ctx)
    result = compare(args.n, args.X, grid, args.formula, table, tables, ctx, workers=cfg.threads)
    w = _Writer(cfg, args.out)
    rows = []
    for r in result:
        rows.append(
            [
                repr(r.meta["effective_T"]),
                r.meta["zero_count"],
                w.fmt(r.lhs.real),
                w.fmt(r.lhs.imag),
                w.fmt(r.rhs.real),
                w.fmt(r.rhs.imag),
                w.fmt(abs(r.residual)),
                repr(r.normalized_residual),
            ]
        )
    meta = {
        "n": args.n,
        "X": str(args.X),
        "formula": args.formula,
        "digits": cfg.digits,
        "c_hat": repr(result.c_hat),
        "growth": repr(result.growth),
        "monotone": result.monotone,
    }
    w.emit(COMPARE_COLUMNS, rows, meta)


def _selfcheck_items(ctx: PrecisionContext):
    """(name, passed, detail) for each identity; deterministic."""
    mp = ctx.mp
    tol = mp.mpf(10) ** (-ctx.digits + 8)
    tables = laurent_table(8, ctx)
    rng = random.Random(20240611)

    worst = max(
        abs(functional_equation_residual(n, mp.mpc(mp.mpf(k) / 10, 10 + 7 * k), ctx))
        for n in range(5)
        for k in range(1, 10)
    )
    yield "functional equation", worst < tol, mp.nstr(worst, 3)

    worst = mp.zero
    for _ in range(6):
        n = rng.randint(1, 4)
        X = RationalX(rng.randint(1, 20), rng.randint(1, 4))
        T = rng.uniform(2 * 3.1416 * float(X.fraction), 1500)
        worst = max(worst, abs(theorem1_rhs(n, X, T, ctx).total - explicit2_rhs(n, X, T, ctx).total))
    yield "theorem1 = explicit2", worst < tol, mp.nstr(worst, 3)

    worst = mp.zero
    for _ in range(4):
        n, X, T = rng.randint(1, 5), rng.randint(2, 30), rng.uniform(500, 5000)
        scale = max(abs(general_sc_rhs(n, T, tables, ctx).total), mp.one)
        diff = corollary_integer_rhs(n, X, T, tables, ctx).total - _corollary_pre_binomial(n, X, T, tables, ctx).total
        worst = max(worst, abs(diff) / scale)
    yield "integer corollary, pre vs post binomial", worst < tol, mp.nstr(worst, 3)

    worst = max(
        abs(fujii_integer_rhs(1, T, tables, ctx).total - fujii_shanks_rhs(T, tables, ctx).total)
        + abs(general_sc_rhs(1, T, tables, ctx).total - fujii_shanks_rhs(T, tables, ctx).total)
        + abs(corollary_integer_rhs(1, 2, T, tables, ctx).total - fujii_integer_rhs(2, T, tables, ctx).total)
        for T in (100, 1000, 10000)
    )
    yield "Fujii collapses at n = 1", worst < tol * 10**4, mp.nstr(worst, 3)

    C = stieltjes_C(5, ctx)
    worst = max(abs(a - b) for a, b in zip(israilov_A(C, 5), a_oracle(5, ctx)))
    yield "Israilov recursion = Cauchy oracle", worst < tol, mp.nstr(worst, 3)


def _cmd_selfcheck(args, cfg: RunConfig):
    failed = 0
    lines = []
    for name, ok, detail in _selfcheck_items(cfg.ctx):
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name}  (max deviation {detail})\n")
    _Writer(cfg, args.out).write_text("".join(lines))
    return 1 if failed else 0


# --------------------------------------------------------------------------


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None, help="working precision (env ZETASUM_DIGITS, default 40)")
    common.add_argument("--threads", type=_positive_int, default=1, help="worker processes for zeros and jets")
    common.add_argument("--zeros", dest="zeros_path", metavar="FILE", help="zero table to use instead of computing one")
    common.add_argument("--trust", action="store_true", help="skip verification of an imported zero table")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output_format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="output_format", action="store_const", const="csv")
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="zetasum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    zeros = sub.add_parser("zeros", help="find, import or export zero tables")
    zsub = zeros.add_subparsers(dest="zeros_command", required=True)
    p = zsub.add_parser("find", parents=[common], help="compute all ordinates up to T")
    p.add_argument("--T", type=_height_arg, required=True)
    p = zsub.add_parser("import", parents=[common], help="verify a zero table file")
    p.add_argument("file")
    p = zsub.add_parser("export", parents=[common], help="write a zero table")
    p.add_argument("--T", type=_height_arg)

    p = sub.add_parser("constants", parents=[common], help="Laurent coefficients C_j and A_j at s = 1")
    p.add_argument("--jmax", type=int, default=10, choices=range(0, 21), metavar="J")

    p = sub.add_parser("rhs", parents=[common], help="evaluate an explicit formula term by term")
    p.add_argument("--formula", choices=RHS_FORMULAS, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--X", type=_x_arg, default=RationalX(1))
    p.add_argument("--T", type=_height_arg)
    p.add_argument("--Y", type=_height_arg, help="argument of s-asym")
    p.add_argument("--error-form", choices=("rh", "unconditional"), default="rh")

    p = sub.add_parser("lhs", parents=[common], help="sum zeta^(n)(rho) X^rho over zeros up to T")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--X", type=_x_arg, default=RationalX(1))
    p.add_argument("--T", type=_height_arg, required=True)

    p = sub.add_parser("compare", parents=[common], help="residuals lhs - rhs along a grid of heights")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--X", type=_x_arg, default=RationalX(1))
    p.add_argument("--Tgrid", type=_grid_arg, required=True)
    p.add_argument("--formula", choices=FORMULAS, required=True)

    sub.add_parser("selfcheck", parents=[common], help="run the identity checks")
    return parser


COMMANDS = {
    "zeros": _cmd_zeros,
    "constants": _cmd_constants,
    "rhs": _cmd_rhs,
    "lhs": _cmd_lhs,
    "compare": _cmd_compare,
    "selfcheck": _cmd_selfcheck,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(
            digits=args.digits if args.digits is not None else _default_digits(),
            zeros_path=args.zeros_path,
            trust_imported=args.trust,
            output_format=args.output_format or "csv",
            threads=args.threads,
        )
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"zetasum: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return 2
    try:
        status = COMMANDS[args.command](args, cfg)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"zetasum: error: {exc}", file=sys.stderr)
        return 2
    except (ZetasumError, ValueError, OSError) as exc:
        print(f"zetasum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
