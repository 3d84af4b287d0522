"""Command-line front end: condition-number runs, grid sweeps, and the
self-check suites, all emitting diff-able CSV.

Exit codes: 0 on success, 1 for unusable arguments or refused
configurations, 2 when a computation failed numerically.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import sys
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .precision import PrecisionContext, DEFAULT_BITS, MIN_BITS
from .errors import (VandercondError, ConfigurationError, DomainError,
                     ConvergenceError, RegimeError)
from . import bounds as bd
from .matrices import (SWEEP_CAP, submatrix_spec, kappa_submatrix,
                       general_submatrix, svd_jacobi, is_cyclically_contiguous)
from .verify import run_suites, format_table, SUITE_NAMES

CSV_HEADER = ["N", "p", "q", "s_start", "t_start", "bits", "status",
              "sigma_max", "sigma_min", "log_kappa", "log_kappa_over_N",
              "barnett_rate", "cor_bound", "catalan_cap", "error_term"]

ERROR_TERM_HEADER = ["N", "alpha", "status", "error_term"]


# ---------------------------------------------------------------------------
# formatting and argument parsing helpers


def _shortest(x, bits: int) -> str:
    """Shortest decimal string that reproduces ``x`` at ``bits`` precision."""
    with gmpy2.context(precision=bits):
        x = +gmpy2.mpfr(x)
    if gmpy2.is_nan(x):
        return "nan"
    if not gmpy2.is_finite(x):
        return "inf" if x > 0 else "-inf"
    if gmpy2.is_zero(x):
        return "0"

    def render(d):
        mant, exp, _ = x.digits(10, d)
        neg = mant.startswith("-")
        if neg:
            mant = mant[1:]
        body = mant[0] + ("." + mant[1:] if len(mant) > 1 else "")
        return ("-" if neg else "") + body + "e" + str(exp - 1)

    hi = int(bits * 0.30103) + 3
    lo = 2
    while lo < hi:
        mid = (lo + hi) // 2
        if gmpy2.mpfr(render(mid), bits) == x:
            hi = mid
        else:
            lo = mid + 1
    return render(lo)


def _fraction_list(text: str):
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            frac = Fraction(part)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"bad fraction {part!r}: {exc}") from None
        if not 0 < frac <= 1:
            raise ConfigurationError(f"grid fraction {part} outside (0, 1]")
        out.append(frac)
    if not out:
        raise ConfigurationError("empty fraction list")
    return out


def _int_list(text: str):
    try:
        return [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise ConfigurationError(f"bad integer list {text!r}: {exc}") from None


@dataclass(frozen=True)
class IndexSelection:
    """Validated --rows/--cols value: sizes plus a canonical window start
    (None when the indices are not cyclically contiguous)."""

    size: int
    start: int | None
    indices: tuple


def _parse_indices(text: str, N: int, what: str) -> IndexSelection:
    """``start:len`` windows or comma lists of 1-based indices.

    Cyclically contiguous selections are canonicalized to start at 1:
    shifting a contiguous block multiplies the submatrix by a diagonal
    unitary, so its singular values do not move.
    """
    if ":" in text:
        try:
            start_s, len_s = text.split(":")
            start, length = int(start_s), int(len_s)
        except ValueError:
            raise ConfigurationError(
                f"{what} must look like start:len, got {text!r}") from None
        if not (1 <= start <= N and 1 <= length <= N):
            raise ConfigurationError(
                f"{what} window {text!r} does not fit inside 1..{N}")
        return IndexSelection(size=length, start=1,
                              indices=tuple(range(1, length + 1)))
    idx = sorted(set(_int_list(text)))
    if not idx:
        raise ConfigurationError(f"{what} must name at least one index")
    if idx[0] < 1 or idx[-1] > N:
        raise ConfigurationError(f"{what} indices must lie in 1..{N}")
    if is_cyclically_contiguous(idx, N):
        return IndexSelection(size=len(idx), start=1,
                              indices=tuple(range(1, len(idx) + 1)))
    return IndexSelection(size=len(idx), start=None, indices=tuple(idx))


def _resolve_bits(bits, N: int) -> int:
    if bits is None:
        if N <= 512:
            return DEFAULT_BITS
        raise ConfigurationError(
            f"no default precision for N = {N} > 512; pass --bits")
    if bits < MIN_BITS:
        raise ConfigurationError(f"bits must be >= {MIN_BITS}, got {bits}")
    return bits


def _refuse_if_underresolved(ctx, N, sizes, bits, force, both_contiguous=True):
    """Refuse runs whose predicted log kappa exhausts the precision budget."""
    if force:
        return
    with ctx.active(8):
        budget = bits * gmpy2.log(2) - 64
        worst = max(bd.corollary_contiguous(ctx, N, p, q, both_contiguous)
                    for p, q in sizes)
        if worst > budget:
            raise ConfigurationError(
                f"predicted log kappa {float(worst):.1f} exceeds the "
                f"{bits}-bit budget ({float(budget):.1f}); rerun with more "
                f"bits or --force")


class _OutputFile:
    """``--out`` target: a file path, or stdout for '-'/None."""

    def __init__(self, path):
        self._path = path

    def __enter__(self):
        if self._path in (None, "-"):
            self._fh = None
            return sys.stdout
        self._fh = open(self._path, "w", encoding="utf-8", newline="")
        return self._fh

    def __exit__(self, *exc):
        if self._fh is not None:
            self._fh.close()


def _emit(fh, comments, header, rows, reproducible):
    writer = csv.writer(fh, lineterminator="\n")
    for line in comments:
        fh.write(f"# {line}\n")
    if not reproducible:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        fh.write(f"# generated {stamp}\n")
    writer.writerow(header)
    writer.writerows(rows)


# ---------------------------------------------------------------------------
# the kappa/sweep row computation (shared by kappa, sweep, error-term)


def _cell_row(task):
    """One CSV row for a (p, q) contiguous diagonal-grid cell.

    Top-level function so process pools can pickle it; builds its own
    precision context.
    """
    N, p, q, bits, max_sweeps = task
    ctx = PrecisionContext(bits=bits)
    with ctx.active(8):
        barnett_rate = bd.barnett_lower(ctx, p, q, N) / N
        cor = bd.corollary_contiguous(ctx, N, p, q)
        cap = bd.catalan_cap(ctx, N)
    row = [str(N), str(p), str(q), "1", "1", str(bits)]
    try:
        rep = kappa_submatrix(ctx, submatrix_spec(N, range(1, p + 1), 1, q),
                              max_sweeps)
    except ConvergenceError:
        return row + ["noconv", "", "", "", "",
                      _shortest(barnett_rate, bits), _shortest(cor, bits),
                      _shortest(cap, bits), ""]
    with ctx.active(8):
        over_n = rep.log_kappa / N
        err = rep.log_kappa - cor
    if rep.singular:
        return row + ["singular", _shortest(rep.sigma_max, bits),
                      _shortest(rep.sigma_min, bits), "", "",
                      _shortest(barnett_rate, bits), _shortest(cor, bits),
                      _shortest(cap, bits), ""]
    return row + ["ok", _shortest(rep.sigma_max, bits),
                  _shortest(rep.sigma_min, bits),
                  _shortest(rep.log_kappa, bits), _shortest(over_n, bits),
                  _shortest(barnett_rate, bits), _shortest(cor, bits),
                  _shortest(cap, bits), _shortest(err, bits)]


# ---------------------------------------------------------------------------
# subcommands


def cmd_kappa(args) -> int:
    N = args.N
    if N < 2:
        raise ConfigurationError(f"need N >= 2, got {N}")
    bits = _resolve_bits(args.bits, N)
    rows_sel = _parse_indices(args.rows or f"1:{N}", N, "--rows")
    cols_sel = _parse_indices(args.cols or f"1:{N}", N, "--cols")
    both_contig = rows_sel.start is not None and cols_sel.start is not None
    ctx = PrecisionContext(bits=bits)
    _refuse_if_underresolved(ctx, N, [(rows_sel.size, cols_sel.size)], bits,
                             args.force, both_contig)

    if both_contig and args.max_sweeps == SWEEP_CAP:
        row = _cell_row((N, rows_sel.size, cols_sel.size, bits,
                         args.max_sweeps))
    else:
        with ctx.active(8):
            barnett = (bd.barnett_lower(ctx, rows_sel.size, cols_sel.size, N)
                       / N) if both_contig else None
            cor = bd.corollary_contiguous(ctx, N, rows_sel.size,
                                          cols_sel.size, both_contig)
            cap = bd.catalan_cap(ctx, N, both_contig)
        if both_contig:
            rep = kappa_submatrix(
                ctx, submatrix_spec(N, range(1, rows_sel.size + 1), 1,
                                    cols_sel.size), args.max_sweeps)
        else:
            rep = svd_jacobi(ctx, general_submatrix(ctx, N, rows_sel.indices,
                                                    cols_sel.indices),
                             args.max_sweeps)
        row = [str(N), str(rows_sel.size), str(cols_sel.size),
               "" if rows_sel.start is None else str(rows_sel.start),
               "" if cols_sel.start is None else str(cols_sel.start),
               str(bits)]
        if rep.singular:
            row += ["singular", _shortest(rep.sigma_max, bits),
                    _shortest(rep.sigma_min, bits), "", "",
                    "" if barnett is None else _shortest(barnett, bits),
                    _shortest(cor, bits), _shortest(cap, bits), ""]
        else:
            with ctx.active(8):
                over_n = rep.log_kappa / N
                err = rep.log_kappa - cor
            row += ["ok", _shortest(rep.sigma_max, bits),
                    _shortest(rep.sigma_min, bits),
                    _shortest(rep.log_kappa, bits), _shortest(over_n, bits),
                    "" if barnett is None else _shortest(barnett, bits),
                    _shortest(cor, bits), _shortest(cap, bits),
                    _shortest(err, bits)]

    # the implied equispaced family wraps the full circle at alpha = 1,
    # where the theorem rate has no value; the regime is still classified
    try:
        report = bd.bounds_report(ctx, N, rows_sel.size, cols_sel.size,
                                  both_contig)
        regime, thm = report.regime, _shortest(report.thm_main, bits)
    except RegimeError:
        regime, thm = bd.Regime.FULL_CIRCLE, ""
    comments = [
        f"vandercond kappa N={N} rows={args.rows or f'1:{N}'} "
        f"cols={args.cols or f'1:{N}'} bits={bits}",
        f"regime={regime.name} thm_main_rate={thm}",
    ]
    with _OutputFile(args.out) as fh:
        _emit(fh, comments, CSV_HEADER, [row], args.reproducible)
    return 0


def _grid_cells(N, alpha_grid, beta_grid):
    cells = []
    for a in alpha_grid:
        for b in beta_grid:
            p, q = a * N, b * N
            if p.denominator != 1 or q.denominator != 1:
                raise ConfigurationError(
                    f"cell ({a}, {b}) is not integral at N = {N}")
            cells.append((int(p), int(q)))
    return cells


def cmd_sweep(args) -> int:
    N = args.N
    if N < 2:
        raise ConfigurationError(f"need N >= 2, got {N}")
    bits = _resolve_bits(args.bits, N)
    alpha_grid = _fraction_list(args.alpha_grid)
    beta_grid = _fraction_list(args.beta_grid) if args.beta_grid \
        else alpha_grid
    cells = _grid_cells(N, alpha_grid, beta_grid)
    ctx = PrecisionContext(bits=bits)
    _refuse_if_underresolved(ctx, N, cells, bits, args.force)

    tasks = [(N, p, q, bits, args.max_sweeps) for p, q in cells]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_cell_row, tasks))
    else:
        rows = [_cell_row(t) for t in tasks]

    comments = [
        f"vandercond sweep N={N} bits={bits} alpha={args.alpha_grid} "
        f"beta={args.beta_grid or args.alpha_grid} seed={args.seed}",
    ]
    with _OutputFile(args.out) as fh:
        _emit(fh, comments, CSV_HEADER, rows, args.reproducible)
    return 0 if all(r[6] == "ok" for r in rows) else 2


def cmd_error_term(args) -> int:
    n_list = _int_list(args.N)
    for n_amb in n_list:
        if n_amb < 16 or n_amb % 2:
            raise ConfigurationError(
                f"error-term runs need even N >= 16, got {n_amb}")
    alpha_grid = _fraction_list(args.alpha_grid)
    bits = _resolve_bits(args.bits, max(n_list))
    ctx = PrecisionContext(bits=bits)
    all_cells = []
    for n_amb in n_list:
        cells = _grid_cells(n_amb, alpha_grid, alpha_grid[:1])
        all_cells.extend((n_amb, p) for p, _ in cells)
    _refuse_if_underresolved(ctx, max(n_list), [(p, p) for _, p in all_cells],
                             bits, args.force)

    rows = []
    failed = False
    for n_amb in n_list:
        for a in alpha_grid:
            p = int(a * n_amb)
            full = _cell_row((n_amb, p, p, bits, args.max_sweeps))
            status, err = full[6], full[14]
            failed = failed or status != "ok"
            rows.append([str(n_amb), str(a), status, err])

    comments = [
        f"vandercond error-term N={args.N} alpha={args.alpha_grid} "
        f"bits={bits}",
        "error_term = log_kappa minus the contiguous upper estimate",
    ]
    with _OutputFile(args.out) as fh:
        _emit(fh, comments, ERROR_TERM_HEADER, rows, args.reproducible)
    return 0 if not failed else 2


def cmd_verify(args) -> int:
    if args.bits < MIN_BITS:
        raise ConfigurationError(f"bits must be >= {MIN_BITS}, got {args.bits}")
    results = run_suites([args.suite], bits=args.bits, seed=args.seed)
    print(format_table(results))
    return 0 if all(r.status != "fail" for r in results) else 2


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for numerical
    failures, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub, with_grids):
    sub.add_argument("--bits", type=int, default=None,
                     help="working precision (default 512 for N <= 512)")
    sub.add_argument("--out", metavar="FILE", default=None,
                     help="CSV destination ('-' or omitted: stdout)")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed recorded with the run")
    sub.add_argument("--reproducible", action="store_true",
                     help="suppress the timestamp comment line")
    sub.add_argument("--force", action="store_true",
                     help="run even when the precision budget looks short")
    sub.add_argument("--max-sweeps", type=int, default=SWEEP_CAP,
                     help="orthogonalization sweep budget per cell "
                          f"(default {SWEEP_CAP}; deep runs near alpha = 1/2 "
                          "at N >= 192 need more)")
    if with_grids:
        sub.add_argument("--alpha-grid", default="1/4,1/2,3/4",
                         help="comma-separated row fractions in (0, 1]")


def _build_parser() -> _Parser:
    parser = _Parser(prog="vandercond",
                     description="Condition numbers of unit-circle "
                                 "Vandermonde and Fourier submatrices, "
                                 "with their closed-form growth bounds.")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    kappa = subs.add_parser("kappa",
                            help="one submatrix: singular values, log "
                                 "kappa, and every bound, as one CSV row")
    kappa.add_argument("--N", type=int, required=True,
                       help="ambient Fourier matrix size")
    kappa.add_argument("--rows", metavar="START:LEN|I,J,...", default=None,
                       help="row selection (default: all rows)")
    kappa.add_argument("--cols", metavar="START:LEN|I,J,...", default=None,
                       help="column selection (default: all columns)")
    _add_common(kappa, with_grids=False)
    kappa.set_defaults(func=cmd_kappa)

    sweep = subs.add_parser("sweep",
                            help="grid of (alpha, beta) cells at one N, "
                                 "emitted as CSV in row-major order")
    sweep.add_argument("--N", type=int, required=True)
    sweep.add_argument("--beta-grid", default=None,
                       help="column fractions (default: the alpha grid)")
    sweep.add_argument("--jobs", type=int, default=1, metavar="K",
                       help="worker processes (default 1)")
    _add_common(sweep, with_grids=True)
    sweep.set_defaults(func=cmd_sweep)

    err = subs.add_parser("error-term",
                          help="log kappa minus the contiguous estimate on "
                               "diagonal cells, across several N")
    err.add_argument("--N", required=True, metavar="N1,N2,...",
                     help="comma-separated even ambient sizes >= 16")
    _add_common(err, with_grids=True)
    err.set_defaults(func=cmd_error_term)

    ver = subs.add_parser("verify", help="run the self-check suites")
    ver.add_argument("suite", choices=list(SUITE_NAMES) + ["all"])
    ver.add_argument("--bits", type=int, default=256)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"vandercond: error: {exc}", file=sys.stderr)
        return 1
    except VandercondError as exc:
        print(f"vandercond: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
