"""Benchmark the compiled Jacobi kernel against the pure-Python reference.

Both backends implement the same ``jacobi_orthogonalize`` contract, so this
times them on identical inputs: half-width Fourier submatrices brought to
triangular form exactly as the SVD pipeline does before handing off to the
kernel.  Run from the repository root:

    python benchmarks/bench_svd.py
    python benchmarks/bench_svd.py --cells 32:192 64:256 --repeat 3

If the compiled extension is unavailable the script reports that and times
only the reference kernel.
"""

from __future__ import annotations

import argparse
import time

import gmpy2

from vandercond import ctx_new, fourier_submatrix, submatrix_spec
from vandercond.matrices import _qrcp
from vandercond._kernels import jacobi_py

try:
    from vandercond._kernels import _jacobi_mpfr
except ImportError:
    _jacobi_mpfr = None


def _prepare(N: int, bits: int):
    """Triangular-form columns for the p = q = N/2 cell, plus kernel params."""
    ctx = ctx_new(bits)
    p = N // 2
    mat = fourier_submatrix(ctx, submatrix_spec(N, range(1, p + 1), 1, p))
    with ctx.active():
        cols = [list(c) for c in mat.cols]
        _, r_cols, _ = _qrcp(ctx, cols)
        b_cols = [[r.conjugate() for r in row]
                  for row in zip(*r_cols)]  # B = R^H, lower triangular
    return b_cols, ctx.bits + 32, -ctx.bits + 16


def _run(kernel, b_cols, prec, conv_exp, max_sweeps):
    n = len(b_cols)
    work = [[gmpy2.mpc(x) for x in c] for c in b_cols]
    v_cols = [[gmpy2.mpc(1) if i == j else gmpy2.mpc(0) for i in range(n)]
              for j in range(n)]
    t0 = time.perf_counter()
    sweeps, converged, _ = kernel.jacobi_orthogonalize(
        work, v_cols, prec, conv_exp, max_sweeps)
    dt = time.perf_counter() - t0
    with gmpy2.context(precision=prec):
        smin = min(gmpy2.sqrt(sum(gmpy2.norm(x) for x in c)) for c in work)
    return dt, sweeps, converged, smin


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", nargs="+", default=["16:128", "32:192", "64:256"],
                    metavar="N:BITS", help="Fourier sizes to time (p = q = N/2)")
    ap.add_argument("--repeat", type=int, default=1,
                    help="repetitions per backend (best time reported)")
    ap.add_argument("--max-sweeps", type=int, default=40)
    args = ap.parse_args()

    backends = [("python", jacobi_py)]
    if _jacobi_mpfr is not None:
        backends.append(("compiled", _jacobi_mpfr))
    else:
        print("compiled extension not available; timing reference kernel only")

    print(f"{'cell':>12} {'backend':>9} {'sweeps':>7} {'time':>9}  speedup")
    for cell in args.cells:
        n_txt, _, b_txt = cell.partition(":")
        N, bits = int(n_txt), int(b_txt or 256)
        b_cols, prec, conv_exp = _prepare(N, bits)
        times = {}
        for name, kernel in backends:
            best = None
            for _ in range(args.repeat):
                dt, sweeps, converged, smin = _run(
                    kernel, b_cols, prec, conv_exp, args.max_sweeps)
                best = dt if best is None else min(best, dt)
            times[name] = (best, sweeps, converged, smin)
            tag = "" if converged else "  (did not converge)"
            speed = (f"{times['python'][0] / best:6.1f}x"
                     if name == "compiled" else "      -")
            print(f"{N:5d}@{bits:<4d}b {name:>9} {sweeps:7d} {best:8.3f}s "
                  f"{speed}{tag}")
        if len(times) == 2:
            a, b = times["python"][3], times["compiled"][3]
            with gmpy2.context(precision=prec):
                rel = abs(a - b) / b if b else gmpy2.mpfr("inf")
            if rel > gmpy2.exp2(-bits // 2):
                print(f"  WARNING: backends disagree on sigma_min "
                      f"(rel {float(rel):.2e})")
                return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
