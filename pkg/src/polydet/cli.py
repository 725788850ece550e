"""Command-line interface: ``polydet <command> [flags]``.

Commands emit one table each (CSV with a leading ``#`` comment line, or JSON
lines with a leading ``meta`` record).  Exit status: 0 when every check in the
table passed, 2 on a certification failure, 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath

from . import __version__, bfk, bounds, exactdet, oracle
from .precision import DOUBLE, resolve_prec
from .types import PolyPotential, parse_complex

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERT = 2

REMAINDER_CEILING = 2.2
SERIES_K = (10**2, 10**3, 10**4, 10**5)
ORACLE_CASES = ("dirichlet_n1_Tpi", "navier_n3_T1", "eigenratio")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class SweepConfig:
    """Resolved sweep flags shared by every command."""

    n_values: list
    T: float
    precision_bits: Optional[int]
    output_path: Optional[str]
    format: str = "csv"
    jobs: int = 1
    flags: dict = field(default_factory=dict)

    def bits_for(self, n: int) -> int:
        return resolve_prec(n, self.precision_bits)


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)


# --- formatting ---------------------------------------------------------------


def _fmt(value, bits: int, native: bool = False):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if native:
            return value
        return repr(value) if bits <= DOUBLE else mpmath.nstr(mpmath.mpf(value), 17)
    digits = max(17, int(bits * math.log10(2)))
    return mpmath.nstr(value, digits, min_fixed=-4, max_fixed=6)


def _render(table: Table, cfg: SweepConfig, bits: int) -> str:
    meta = {"tool": "polydet", "version": __version__, "precision_bits": bits, "flags": cfg.flags}
    buf = io.StringIO()
    if cfg.format == "jsonl":
        buf.write(json.dumps({"meta": meta}, sort_keys=True) + "\n")
        for row in table.rows:
            rec = {c: _fmt(v, bits, native=True) for c, v in zip(table.columns, row)}
            buf.write(json.dumps(rec) + "\n")
        return buf.getvalue()
    flags = " ".join(f"{k}={v}" for k, v in sorted(cfg.flags.items()))
    buf.write(f"# polydet {__version__} precision_bits={bits} {flags}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v, bits) for v in row])
    return buf.getvalue()


def _emit(table: Table, cfg: SweepConfig, bits: int) -> None:
    text = _render(table, cfg, bits)
    if cfg.output_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))  # map keeps input order


# --- argument handling ----------------------------------------------------------


def parse_potential(specs: Sequence[str] | None) -> PolyPotential:
    """``["0:1", "1:0,2.5"]`` -> q_0 = 1, q_1 = 2.5 x.  Complex entries as ``a+bi``."""
    coeffs = {}
    for spec in specs or ():
        order, sep, body = spec.partition(":")
        if not sep or not order.strip().isdigit() or not body.strip():
            raise UsageError(f"--q expects j:c0,c1,..., got {spec!r}")
        try:
            values = tuple(parse_complex(c) for c in body.split(","))
        except ValueError:
            raise UsageError(f"cannot parse coefficients in --q {spec!r}") from None
        j = int(order)
        if j in coeffs:
            raise UsageError(f"--q given twice for order {j}")
        coeffs[j] = values
    return PolyPotential(coeffs)


def _n_values(args) -> list:
    n, n_range, n_step = (getattr(args, k, None) for k in ("n", "n_range", "n_step"))
    if n is not None and n_range is not None:
        raise UsageError("give either --n or --n-range, not both")
    if n is not None:
        return list(n)
    if n_range is not None:
        start, stop = n_range
        if n_step < 1:
            raise UsageError("--n-step must be >= 1")
        if start < 1 or stop < start:
            raise UsageError(f"--n-range needs 1 <= START <= STOP, got {start} {stop}")
        return list(range(start, stop + 1, n_step))
    return []


def _config(args) -> SweepConfig:
    if args.precision is not None and args.precision < DOUBLE:
        raise UsageError(f"--precision must be >= {DOUBLE}")
    if not args.T > 0:
        raise UsageError("--T must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    flags = {
        k: (" ".join(map(str, v)) if isinstance(v, (list, tuple)) else v)
        for k, v in sorted(vars(args).items())
        if k not in ("func", "output", "jobs") and v is not None
    }
    return SweepConfig(_n_values(args), args.T, args.precision, args.output, args.format, args.jobs, flags)


def _require_n(cfg: SweepConfig, minimum: int = 1) -> None:
    if not cfg.n_values:
        raise UsageError("give --n or --n-range")
    low = min(cfg.n_values)
    if low < minimum:
        raise UsageError(f"n={low} is below the supported minimum {minimum}")


def _max_bits(cfg: SweepConfig) -> int:
    return max((cfg.bits_for(n) for n in cfg.n_values), default=cfg.precision_bits or DOUBLE)


# --- commands -------------------------------------------------------------------


def _closed_form_row(task):
    n, T, prec = task
    ld = exactdet.log_det_polyharmonic(n, T, prec).log_modulus
    asym = bounds.asymptotic_logdet(n, T, prec)
    with mpmath.workprec(max(prec, DOUBLE)):
        rem = ld - asym
        return [n, T, ld, asym, rem, rem / n]


def cmd_closed_form(args) -> int:
    cfg = _config(args)
    _require_n(cfg)
    rows = _map(_closed_form_row, [(n, cfg.T, cfg.bits_for(n)) for n in cfg.n_values], cfg.jobs)
    table = Table(["n", "T", "log_det", "asymptote", "remainder", "remainder_over_n"], rows)
    table.failures = [r[0] for r in rows if abs(r[5]) > REMAINDER_CEILING]
    _emit(table, cfg, _max_bits(cfg))
    return _finish(table, f"|remainder|/n above {REMAINDER_CEILING}")


def _bounds_row(task):
    n, T, prec, kind = task
    rep = bounds.neg_log_F_report(n, prec) if kind == "neg-log-F" else bounds.logdet_two_sided(n, T, prec)
    return [n, rep.lower, rep.direct, rep.upper, rep.slack_lower, rep.slack_upper, rep.certified]


def cmd_bounds(args) -> int:
    cfg = _config(args)
    _require_n(cfg, minimum=2)
    tasks = [(n, cfg.T, cfg.bits_for(n), args.kind) for n in cfg.n_values]
    rows = _map(_bounds_row, tasks, cfg.jobs)
    table = Table(["n", "lower", "direct", "upper", "slack_lower", "slack_upper", "certified"], rows)
    table.failures = [r[0] for r in rows if not r[-1]]
    _emit(table, cfg, _max_bits(cfg))
    return _finish(table, "sandwich violated")


def _series_row(task):
    name, K, prec = task
    target = bounds.series_target(name)
    s, t, err = bounds.series_error(target, K, prec)
    with mpmath.workprec(max(prec, DOUBLE)):
        if target.tail_ratio is not None:
            fitted = err / mpmath.mpf(target.tail_ratio) ** K
        else:
            fitted = err * mpmath.mpf(K) ** target.tail_exponent
    return [name, K, s, t, err, fitted]


def cmd_series(args) -> int:
    cfg = _config(args)
    names = args.series or list(bounds.SERIES)
    for name in names:
        if name not in bounds.SERIES:
            raise UsageError(f"unknown series {name!r}; known: {', '.join(bounds.SERIES)}")
    Ks = args.K or list(SERIES_K)
    if min(Ks) < 1:
        raise UsageError("--K values must be >= 1")
    prec = cfg.precision_bits or DOUBLE
    rows = _map(_series_row, [(name, K, prec) for name in names for K in Ks], cfg.jobs)
    table = Table(["series", "K", "partial_sum", "target", "abs_error", "tail_constant"], rows)
    _emit(table, cfg, prec)
    return EXIT_OK


def _perturbed_row(task):
    n, T, potential, tol, prec = task
    P = exactdet.log_det_polyharmonic(n, T, prec)
    try:
        H = bfk.det_perturbed(n, potential, T, tol, prec)
    except bfk.DeterminantZero:
        return [n, P.log_modulus, None, None, None, None, None]
    with mpmath.workprec(prec):
        r = abs(H.log_modulus - P.log_modulus)
        return [n, P.log_modulus, H.log_modulus, H.phase, r, n * r, H.truncation_bound]


def cmd_perturbed(args) -> int:
    cfg = _config(args)
    _require_n(cfg)
    potential = parse_potential(args.q)
    for n in cfg.n_values:
        if potential.max_order > n:
            raise UsageError(
                f"perturbation order {potential.max_order} exceeds n={n}; the determinant "
                "expansion assumes m <= n"
            )
        if n > bfk.MAX_N:
            raise UsageError(f"n={n} outside the BFK range 1..{bfk.MAX_N}")
        if n == 1 and potential.order(1):
            raise UsageError("a first-order term at n=1 is of order 2n-1; not supported")
    prec = cfg.precision_bits or bfk.default_prec(args.tol)
    tasks = [(n, cfg.T, potential, args.tol, prec) for n in cfg.n_values]
    rows = _map(_perturbed_row, tasks, cfg.jobs)
    table = Table(["n", "log_det_P", "log_det_H", "phase_H", "r_n", "n_r_n", "truncation_bound"], rows)
    table.failures = [r[0] for r in rows if r[2] is None]
    _emit(table, cfg, prec)
    return _finish(table, "determinant indistinguishable from zero")


def _oracle_row(case: str, cfg: SweepConfig, args, prec: int):
    with mpmath.workprec(prec):
        return _oracle_row_at(case, cfg, args, prec)


def _oracle_row_at(case: str, cfg: SweepConfig, args, prec: int):
    if case == "eigenratio":
        potential = parse_potential(args.q) if args.q else PolyPotential.constant(1)
        tol = args.tol
        try:
            theirs = oracle.det_ratio_by_eigenvalues(potential, cfg.T, args.K)
            H = bfk.det_perturbed(1, potential, cfg.T, prec=prec)
        except (oracle.BracketError, oracle.RatioUndefined, bfk.DeterminantZero) as exc:
            print(f"eigenratio: {exc}", file=sys.stderr)
            return [case, None, None, None, tol, False]
        except ValueError as exc:
            raise UsageError(f"eigenratio: {exc}") from None
        P = exactdet.log_det_polyharmonic(1, cfg.T, prec)
        with mpmath.workprec(prec):
            ours = mpmath.exp(H.log_modulus - P.log_modulus)
    else:
        try:
            theirs = oracle.exact_reference(case, prec)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
        tol = args.exact_tol
        if case.startswith("dirichlet_n1_T"):
            T = theirs / 2
            ours = bfk.det_perturbed(1, PolyPotential.zero(), T, prec=prec).value()
        elif case.startswith("navier_zeta_prime"):
            n, T = _navier_params(case, prec)
            ours = -exactdet.navier_log_det(n, T, prec)
        else:
            n, T = _navier_params(case, prec)
            with mpmath.workprec(prec):
                ours = mpmath.exp(exactdet.navier_log_det(n, T, prec))
    with mpmath.workprec(prec):
        ours = mpmath.re(ours)
        rel = abs(ours - theirs) / abs(theirs) if theirs else abs(ours)
    return [case, ours, theirs, rel, tol, rel <= tol]


def _navier_params(case: str, prec: int):
    body = case.split("_n", 1)[1]
    n_text, T_text = body.split("_T", 1)
    return int(n_text), oracle._parse_length(T_text, prec)


def cmd_oracle(args) -> int:
    cfg = _config(args)
    prec = cfg.precision_bits or 128
    cases = args.case or list(ORACLE_CASES)
    rows = [_oracle_row(case, cfg, args, prec) for case in cases]
    table = Table(["case", "bfk_value", "oracle_value", "rel_diff", "tolerance", "passed"], rows)
    table.failures = [r[0] for r in rows if not r[-1]]
    _emit(table, cfg, prec)
    return _finish(table, "relative difference above tolerance")


def _finish(table: Table, what: str) -> int:
    if table.failures:
        print(f"certification failed ({what}) for: {', '.join(map(str, table.failures))}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, sweep: bool = True) -> None:
    if sweep:
        p.add_argument("--n", type=int, nargs="+", help="explicit n values")
        p.add_argument("--n-range", type=int, nargs=2, metavar=("START", "STOP"), help="inclusive n range")
        p.add_argument("--n-step", type=int, default=1, help="stride for --n-range (default 1)")
    p.add_argument("--T", type=float, default=1.0, help="interval length (default 1)")
    p.add_argument("--precision", type=int, help="mantissa bits (default: 53 up to n=10^4, extended above)")
    p.add_argument("--output", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polydet", description="Determinants of Dirichlet polyharmonic operators.")
    parser.add_argument("--version", action="version", version=f"polydet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("closed-form", help="closed-form log det P_n and the asymptote")
    _common(p)
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("bounds", help="certify the two-sided bounds")
    _common(p)
    p.add_argument("--kind", choices=("neg-log-F", "logdet"), default="neg-log-F",
                   help="bound -log F(n) (default) or log det P_n")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("series", help="convergence of the series constants")
    _common(p, sweep=False)
    p.add_argument("--series", nargs="+", help=f"subset of {', '.join(bounds.SERIES)}")
    p.add_argument("--K", type=int, nargs="+", help="truncation points (default 10^2..10^5)")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("perturbed", help="BFK determinant of the perturbed operator")
    _common(p)
    p.add_argument("--q", action="append", metavar="j:c0,c1,...",
                   help="coefficients of q_j(x) = c0 + c1 x + ...; repeat per order")
    p.add_argument("--tol", type=float, default=bfk.DEFAULT_TOL, help="Picard tolerance")
    p.set_defaults(func=cmd_perturbed)

    p = sub.add_parser("oracle", help="compare against independent references")
    _common(p, sweep=False)
    p.add_argument("--case", nargs="+", help=f"cases (default {' '.join(ORACLE_CASES)})")
    p.add_argument("--q", action="append", metavar="0:c0,c1,...", help="potential for eigenratio (default 0:1)")
    p.add_argument("--K", type=int, default=2048, help="eigenvalue count for eigenratio")
    p.add_argument("--tol", type=float, default=1e-4, help="tolerance for eigenratio")
    p.add_argument("--exact-tol", type=float, default=1e-12, help="tolerance for reference cases")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polydet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"polydet {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
