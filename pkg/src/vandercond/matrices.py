"""Fourier submatrices, Vandermonde matrices, and a Jacobi SVD over MPC.

Matrices are dense and column-major: a :class:`Matrix` holds a tuple of
columns, each a tuple of ``gmpy2.mpc`` entries.  No FFT enters the ground
truth anywhere — entries are evaluated directly from angles so that results
stand on MPFR's correctly rounded elementary functions alone.

The singular value driver is a one-sided Jacobi orthogonalization (the
kernels live in :mod:`vandercond._kernels`, with a compiled MPFR extension
and a pure-Python fallback selected at import).  One-sided Jacobi computes
tiny singular values with high *relative* accuracy, which is what makes
condition numbers of size e^(0.58 N) trustworthy at a few hundred bits.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import gmpy2

from ._kernels import BACKEND, jacobi_orthogonalize
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DegeneracyError,
    UnsupportedMeasureError,
)
from .lagrange import NodeSet
from .measures import ARC_UNIFORM, CIRCLE_UNIFORM, DISCRETE, Measure
from .precision import PrecisionContext, unit_point

SWEEP_CAP = 40


@dataclass(frozen=True)
class Matrix:
    """A dense complex matrix stored as a tuple of columns."""

    cols: tuple

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @property
    def nrows(self) -> int:
        return len(self.cols[0]) if self.cols else 0

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> gmpy2.mpc:
        return self.cols[j][i]

    def row(self, i: int) -> tuple:
        return tuple(c[i] for c in self.cols)


def matrix_from_cols(cols) -> Matrix:
    # mpc entries pass through untouched (gmpy2.mpc(x) would round them to
    # the ambient context precision); everything else is coerced for the
    # strict-typed compiled kernel.
    cols = tuple(tuple(x if isinstance(x, gmpy2.mpc) else gmpy2.mpc(x)
                       for x in c) for c in cols)
    if not cols or not cols[0]:
        raise ConfigurationError("a matrix needs at least one row and one column")
    if len({len(c) for c in cols}) != 1:
        raise ConfigurationError("ragged columns")
    return Matrix(cols=cols)


def matrix_from_rows(rows) -> Matrix:
    rows = [tuple(r) for r in rows]
    if not rows or not rows[0]:
        raise ConfigurationError("a matrix needs at least one row and one column")
    return matrix_from_cols(list(zip(*rows)))


def conj_transpose(m: Matrix) -> Matrix:
    return matrix_from_cols(
        tuple(tuple(m.cols[j][i].conjugate() for j in range(m.ncols))
              for i in range(m.nrows)))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.nrows:
        raise ConfigurationError(f"shape mismatch {a.shape} x {b.shape}")
    out = []
    for bc in b.cols:
        col = [gmpy2.mpc(0)] * a.nrows
        for k, scale in enumerate(bc):
            ac = a.cols[k]
            for i in range(a.nrows):
                col[i] += scale * ac[i]
        out.append(tuple(col))
    return Matrix(cols=tuple(out))


def matrix_sub(a: Matrix, b: Matrix) -> Matrix:
    if a.shape != b.shape:
        raise ConfigurationError(f"shape mismatch {a.shape} vs {b.shape}")
    return Matrix(cols=tuple(tuple(x - y for x, y in zip(ca, cb))
                             for ca, cb in zip(a.cols, b.cols)))


def frobenius(m: Matrix) -> gmpy2.mpfr:
    acc = gmpy2.mpfr(0)
    for c in m.cols:
        for x in c:
            acc += gmpy2.norm(x)
    return gmpy2.sqrt(acc)


# ---------------------------------------------------------------------------
# submatrix specifications


@dataclass(frozen=True)
class SubmatrixSpec:
    """Rows and a cyclically contiguous column window of the N x N Fourier
    matrix, indices 1-based."""

    N: int
    rows: frozenset
    col_start: int
    col_len: int

    @property
    def alpha(self) -> Fraction:
        return Fraction(max(len(self.rows), self.col_len), self.N)

    @property
    def beta(self) -> Fraction:
        return Fraction(min(len(self.rows), self.col_len), self.N)


def submatrix_spec(N: int, rows, col_start: int, col_len: int) -> SubmatrixSpec:
    if not isinstance(N, int) or N < 2:
        raise ConfigurationError(f"N must be an integer >= 2, got {N!r}")
    rows = frozenset(int(r) for r in rows)
    if not rows or any(r < 1 or r > N for r in rows):
        raise ConfigurationError("rows must be a nonempty subset of 1..N")
    if not 1 <= col_start <= N or not 1 <= col_len <= N:
        raise ConfigurationError("column window must satisfy 1 <= start, len <= N")
    return SubmatrixSpec(N=N, rows=rows, col_start=int(col_start), col_len=int(col_len))


def is_cyclically_contiguous(indices, N: int) -> bool:
    """True when the 1-based index set is a run of consecutive residues mod N."""
    idx = sorted(set(int(i) for i in indices))
    if len(idx) in (0, N):
        return len(idx) == N
    gaps = 0
    for a, b in zip(idx, idx[1:] + [idx[0] + N]):
        if b - a > 1:
            gaps += 1
    return gaps <= 1


def _col_indices(spec: SubmatrixSpec):
    return [((spec.col_start - 1 + t) % spec.N) + 1 for t in range(spec.col_len)]


def fourier_submatrix(ctx: PrecisionContext, spec: SubmatrixSpec) -> Matrix:
    """The |rows| x col_len submatrix of the N x N Fourier matrix with
    entries e^(2 pi i (j-1)(k-1) / N)."""
    with ctx.active():
        two_pi = 2 * gmpy2.const_pi()
        rows = sorted(spec.rows)
        cols = []
        for k in _col_indices(spec):
            col = []
            for j in rows:
                w = ((j - 1) * (k - 1)) % spec.N
                col.append(unit_point(ctx, two_pi * w / spec.N))
            cols.append(tuple(col))
        return Matrix(cols=tuple(cols))


def general_submatrix(ctx: PrecisionContext, N: int, rows, cols) -> Matrix:
    """A Fourier submatrix with arbitrary (possibly non-contiguous) row and
    column index sets, both 1-based."""
    rows = sorted(set(int(r) for r in rows))
    cols = sorted(set(int(c) for c in cols))
    if not rows or not cols:
        raise ConfigurationError("row and column sets must be nonempty")
    if rows[0] < 1 or rows[-1] > N or cols[0] < 1 or cols[-1] > N:
        raise ConfigurationError("indices must lie in 1..N")
    with ctx.active():
        two_pi = 2 * gmpy2.const_pi()
        out = []
        for k in cols:
            col = [unit_point(ctx, two_pi * (((j - 1) * (k - 1)) % N) / N)
                   for j in rows]
            out.append(tuple(col))
        return Matrix(cols=tuple(out))


def vandermonde(ctx: PrecisionContext, nodes) -> Matrix:
    """The (n+1) x (n+1) matrix whose column k holds the powers
    1, z_k, ..., z_k^n of node k."""
    pts = nodes.points if isinstance(nodes, NodeSet) else tuple(gmpy2.mpc(z) for z in nodes)
    if not pts:
        raise ConfigurationError("need at least one node")
    n = len(pts) - 1
    with ctx.active(32):
        cols = []
        for z in pts:
            col = [gmpy2.mpc(1)]
            for _ in range(n):
                col.append(col[-1] * z)
            cols.append(tuple(col))
        return Matrix(cols=tuple(cols))


# ---------------------------------------------------------------------------
# Vandermonde-like matrices and Gram matrices


@dataclass(frozen=True)
class VandermondeLikeSpec:
    """A polynomial basis (coefficient vectors, ascending powers), evaluation
    nodes, the orthogonality measure, and the basis sup-norm over supp(nu)."""

    basis: tuple
    nodes: tuple
    nu: Measure
    gamma_max: gmpy2.mpfr | None = None


def vandermonde_like_spec(ctx: PrecisionContext, basis, nodes, nu: Measure,
                          gamma_max=None) -> VandermondeLikeSpec:
    with ctx.active(32):
        b = tuple(tuple(gmpy2.mpc(c) for c in vec) for vec in basis)
        pts = nodes.points if isinstance(nodes, NodeSet) else tuple(gmpy2.mpc(z) for z in nodes)
        if not b or any(len(v) == 0 for v in b):
            raise ConfigurationError("basis must be a nonempty list of coefficient vectors")
        g = gmpy2.mpfr(gamma_max) if gamma_max is not None else None
        return VandermondeLikeSpec(basis=b, nodes=pts, nu=nu, gamma_max=g)


def _poly_eval(coeffs, z):
    acc = gmpy2.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def vandermonde_like(ctx: PrecisionContext, spec: VandermondeLikeSpec) -> Matrix:
    """Entry (j, k) is p_k(z_j): rows are indexed by the nodes."""
    with ctx.active(32):
        cols = []
        for coeffs in spec.basis:
            cols.append(tuple(_poly_eval(coeffs, z) for z in spec.nodes))
        return Matrix(cols=tuple(cols))


def basis_sup_norm(ctx: PrecisionContext, spec: VandermondeLikeSpec,
                   grid_size: int = 1024) -> gmpy2.mpfr:
    """max over basis polynomials of sup |p_j| on supp(nu), located on a grid."""
    with ctx.active(32):
        nu = spec.nu
        if nu.kind == DISCRETE:
            sample = list(nu.atoms)
        else:
            if nu.kind not in (ARC_UNIFORM, CIRCLE_UNIFORM):
                raise UnsupportedMeasureError(
                    "sup-norm sampling supports circle, arc, and discrete measures")
            a, b = nu.arc
            sample = [unit_point(ctx, a + (b - a) * g / grid_size)
                      for g in range(grid_size + 1)]
        best = gmpy2.mpfr(0)
        for coeffs in spec.basis:
            for z in sample:
                v = abs(_poly_eval(coeffs, z))
                if v > best:
                    best = v
        return best


def gram_matrix(ctx: PrecisionContext, basis, nu: Measure, *,
                allow_quadrature: bool = False) -> Matrix:
    """Gram matrix G[j][k] = integral of p_j * conj(p_k) d nu.

    The circle-uniform measure pairs matched monomial coefficients exactly;
    a discrete measure averages pointwise products over its atoms.  Other
    measures need ``allow_quadrature=True`` (entries are then adaptive
    integrals over the arc) and the disk variant is not supported.
    """
    with ctx.active(32):
        vecs = [tuple(gmpy2.mpc(c) for c in v) for v in basis]
        if not vecs:
            raise ConfigurationError("empty basis")
        d = len(vecs)

        if nu.kind == CIRCLE_UNIFORM:
            def inner(pj, pk):
                acc = gmpy2.mpc(0)
                for m in range(min(len(pj), len(pk))):
                    acc += pj[m] * pk[m].conjugate()
                return acc
        elif nu.kind == DISCRETE:
            def inner(pj, pk):
                acc = gmpy2.mpc(0)
                for w in nu.atoms:
                    acc += _poly_eval(pj, w) * _poly_eval(pk, w).conjugate()
                return acc / len(nu.atoms)
        elif nu.kind == ARC_UNIFORM and allow_quadrature:
            from .quadrature import integrate

            a, b = nu.arc

            def inner(pj, pk):
                def re_part(t):
                    v = _poly_eval(pj, unit_point(ctx, t)) \
                        * _poly_eval(pk, unit_point(ctx, t)).conjugate()
                    return v.real

                def im_part(t):
                    v = _poly_eval(pj, unit_point(ctx, t)) \
                        * _poly_eval(pk, unit_point(ctx, t)).conjugate()
                    return v.imag

                return gmpy2.mpc(integrate(ctx, re_part, a, b),
                                 integrate(ctx, im_part, a, b)) / (b - a)
        else:
            raise UnsupportedMeasureError(
                f"no closed-form Gram pairing for measure kind {nu.kind!r}"
                + ("" if allow_quadrature else
                   " (pass allow_quadrature=True for arc measures)"))

        cols = [[None] * d for _ in range(d)]
        for j in range(d):
            for k in range(j, d):
                v = inner(vecs[j], vecs[k])
                cols[k][j] = v
                if k != j:
                    cols[j][k] = v.conjugate()
        return Matrix(cols=tuple(tuple(c) for c in cols))


# ---------------------------------------------------------------------------
# the SVD driver


@dataclass(frozen=True)
class SpectralReport:
    """Singular values and conditioning of one matrix."""

    sigma_max: gmpy2.mpfr
    sigma_min: gmpy2.mpfr
    kappa: gmpy2.mpfr
    log_kappa: gmpy2.mpfr
    converged: bool
    sweeps: int
    singular: bool
    sigmas: tuple


def _qrcp(ctx: PrecisionContext, cols):
    """Householder QR with column pivoting:  A P = Q R.

    Returns ``(reflectors, r_cols, perm)``.  ``reflectors[k]`` is ``(v, coef)``
    describing the Hermitian unitary H_k = I - coef v v^H acting on rows
    k..m-1 (``None`` when the remaining column was exactly zero), so
    Q = H_0 H_1 ... .  ``r_cols`` holds the columns of the n x n triangle R
    and ``perm[k]`` names the source column of A placed at position k.
    """
    work = [[x for x in c] for c in cols]
    n = len(work)
    m = len(work[0])
    perm = list(range(n))
    res2 = []
    for c in work:
        acc = gmpy2.mpfr(0)
        for x in c:
            acc += gmpy2.norm(x)
        res2.append(acc)
    reflectors = []
    for k in range(min(m, n)):
        big = max(range(k, n), key=lambda j: res2[j])
        if big != k:
            work[k], work[big] = work[big], work[k]
            perm[k], perm[big] = perm[big], perm[k]
            res2[k], res2[big] = res2[big], res2[k]
        col_k = work[k]
        nx2 = gmpy2.mpfr(0)
        for i in range(k, m):
            nx2 += gmpy2.norm(col_k[i])
        nx = gmpy2.sqrt(nx2)
        if gmpy2.is_zero(nx):
            # remaining part of the pivot column is exactly zero; rows k..
            # of every later column stay untouched by construction
            reflectors.append((None, gmpy2.mpfr(0)))
            continue
        x0 = col_k[k]
        a0 = abs(x0)
        phase = x0 / a0 if a0 > 0 else gmpy2.mpc(1)
        v = [gmpy2.mpc(col_k[i]) for i in range(k, m)]
        v[0] += phase * nx
        coef = 1 / (nx2 + nx * a0)        # == 2 / ||v||^2
        reflectors.append((tuple(v), coef))
        col_k[k] = -phase * nx
        for i in range(k + 1, m):
            col_k[i] = gmpy2.mpc(0)
        for j in range(k + 1, n):
            col = work[j]
            dot = gmpy2.mpc(0)
            for i in range(k, m):
                dot += v[i - k].conjugate() * col[i]
            scale = coef * dot
            for i in range(k, m):
                col[i] -= scale * v[i - k]
            res2[j] -= gmpy2.norm(col[k])
            if res2[j] < 0:
                res2[j] = gmpy2.mpfr(0)
    r_cols = [tuple(work[j][:n]) for j in range(n)]
    return reflectors, r_cols, perm


def _apply_reflectors(ctx: PrecisionContext, reflectors, cols, m: int):
    """Q @ X for the Householder product from :func:`_qrcp`; the columns of
    X are zero-padded to length ``m`` first."""
    out = []
    for c in cols:
        y = list(c) + [gmpy2.mpc(0)] * (m - len(c))
        for k in range(len(reflectors) - 1, -1, -1):
            v, coef = reflectors[k]
            if v is None:
                continue
            dot = gmpy2.mpc(0)
            for i in range(k, m):
                dot += v[i - k].conjugate() * y[i]
            scale = coef * dot
            for i in range(k, m):
                y[i] -= scale * v[i - k]
        out.append(tuple(y))
    return out


def _run_jacobi(ctx: PrecisionContext, b_cols, shape, max_sweeps: int):
    # orthogonalize the column set in place; returns working columns,
    # accumulated right-rotation columns, sweep count
    work = [[gmpy2.mpc(x) for x in c] for c in b_cols]
    n = len(work)
    v_cols = [[gmpy2.mpc(1) if i == j else gmpy2.mpc(0) for i in range(n)]
              for j in range(n)]
    prec = ctx.bits + 32
    conv_exp = -ctx.bits + 16
    sweeps, converged, off_rel = jacobi_orthogonalize(
        work, v_cols, prec, conv_exp, max_sweeps)
    if not converged:
        raise ConvergenceError(
            f"Jacobi SVD did not converge within {max_sweeps} sweeps",
            diagnostics={"sweeps": sweeps, "off_diag_rel": off_rel,
                         "shape": shape, "backend": BACKEND,
                         "bits": ctx.bits})
    return work, v_cols, sweeps


def svd_factors(ctx: PrecisionContext, m: Matrix,
                max_sweeps: int = SWEEP_CAP):
    """Full factorization M = U diag(sigmas) V^H with sigmas descending.

    The columns are first brought to graded triangular form by a pivoted
    Householder QR; the Jacobi kernel then orthogonalizes the conjugate
    transpose of the triangle, which keeps sweep counts flat even when the
    condition number approaches the precision budget.  For tall input U has
    orthonormal columns and a zero singular value leaves the matching
    column of V zero (roles swap for wide input).
    """
    with ctx.active(32):
        transposed = m.nrows < m.ncols
        work_m = conj_transpose(m) if transposed else m
        nrows, ncols = work_m.shape

        # A P = Q R;  R^H = W S X^H;  then  A = (Q X) S (P W)^H.
        reflectors, r_cols, perm = _qrcp(ctx, work_m.cols)
        b_cols = [[r_cols[j][i].conjugate() for j in range(ncols)]
                  for i in range(ncols)]
        cols, v_cols, sweeps = _run_jacobi(ctx, b_cols, work_m.shape,
                                           max_sweeps)

        sig_col = []
        for c in cols:
            acc = gmpy2.mpfr(0)
            for x in c:
                acc += gmpy2.norm(x)
            sig_col.append(gmpy2.sqrt(acc))
        order = sorted(range(ncols), key=lambda j: sig_col[j], reverse=True)

        sigmas = tuple(sig_col[j] for j in order)
        u_cols = _apply_reflectors(ctx, reflectors,
                                   [tuple(v_cols[j]) for j in order], nrows)
        v_out = []
        for j in order:
            s = sig_col[j]
            col = [gmpy2.mpc(0)] * ncols
            if not gmpy2.is_zero(s):
                for i in range(ncols):
                    col[perm[i]] = cols[j][i] / s
            v_out.append(tuple(col))

        u = Matrix(cols=tuple(u_cols))
        v = Matrix(cols=tuple(v_out))
        if transposed:
            u, v = v, u
        return u, sigmas, v, sweeps


def svd_jacobi(ctx: PrecisionContext, m: Matrix,
               max_sweeps: int = SWEEP_CAP) -> SpectralReport:
    """Singular values of ``m`` by one-sided Jacobi orthogonalization.

    Convergence means every column-pair cosine fell below 2^(-bits+16); the
    backward error ||M - U S V^H||_F stays below 2^(-bits+32) ||M||_F.  A
    matrix whose smallest singular value falls below 2^(-bits+64) times the
    largest is reported ``singular`` with an infinite condition number
    rather than an untrustworthy finite one.  Exceeding ``max_sweeps``
    raises :class:`ConvergenceError` with diagnostics.
    """
    with ctx.active(32):
        _, sigmas, _, sweeps = svd_factors(ctx, m, max_sweeps)
        s_max = sigmas[0]
        s_min = sigmas[-1]
        singular = bool(s_min < gmpy2.exp2(-ctx.bits + 64) * s_max) \
            or gmpy2.is_zero(s_max)
        if singular:
            kappa = gmpy2.inf()
            log_kappa = gmpy2.inf()
        else:
            kappa = s_max / s_min
            log_kappa = gmpy2.log(kappa)
        return SpectralReport(sigma_max=s_max, sigma_min=s_min, kappa=kappa,
                              log_kappa=log_kappa, converged=True,
                              sweeps=sweeps, singular=singular, sigmas=sigmas)


def kappa_submatrix(ctx: PrecisionContext, spec: SubmatrixSpec,
                    max_sweeps: int = SWEEP_CAP) -> SpectralReport:
    """Build the Fourier submatrix of ``spec`` and report its conditioning.

    ``max_sweeps`` raises the Jacobi sweep budget above the default cap for
    deliberately deep runs (giant cells whose near-degenerate top singular
    values delay the quadratic convergence phase).
    """
    return svd_jacobi(ctx, fourier_submatrix(ctx, spec), max_sweeps)


def inverse_column_norms(ctx: PrecisionContext, m: Matrix) -> list:
    """[ ||M^{-1} e_k|| for each k ], from the SVD factors.

    M^{-1} e_k = V S^{-1} U^H e_k, and V has orthonormal columns, so the norm
    is that of S^{-1} (row k of U)^H.  Raises :class:`DegeneracyError` when
    the matrix is numerically singular.
    """
    with ctx.active(32):
        if m.nrows != m.ncols:
            raise ConfigurationError("inverse norms need a square matrix")
        u, sigmas, _, _ = svd_factors(ctx, m)
        if gmpy2.is_zero(sigmas[-1]) or \
                sigmas[-1] < gmpy2.exp2(-ctx.bits + 64) * sigmas[0]:
            raise DegeneracyError("matrix is numerically singular")
        out = []
        for k in range(m.nrows):
            acc = gmpy2.mpfr(0)
            for j, s in enumerate(sigmas):
                acc += gmpy2.norm(u.cols[j][k]) / (s * s)
            out.append(gmpy2.sqrt(acc))
        return out


# ---------------------------------------------------------------------------
# determinants and the rectangular sandwich


def det_log_vandermonde(ctx: PrecisionContext, nodes) -> gmpy2.mpfr:
    """log |det V| for unit-circle nodes: sum over pairs j < k of
    log(2 sin((theta_k - theta_j)/2)).

    Accepts a NodeSet or raw angles; duplicated angles give -inf (the
    determinant vanishes) instead of an exception.
    """
    with ctx.active(32):
        if isinstance(nodes, NodeSet):
            angles = list(nodes.angles)
        else:
            two_pi = 2 * gmpy2.const_pi()
            angles = []
            for a in nodes:
                t = gmpy2.fmod(gmpy2.mpfr(a), two_pi)
                if t < 0:
                    t += two_pi
                angles.append(t)
            angles.sort()
        acc = gmpy2.mpfr(0)
        for j in range(len(angles)):
            for k in range(j + 1, len(angles)):
                d = angles[k] - angles[j]
                if gmpy2.is_zero(d):
                    return gmpy2.mpfr("-inf")
                acc += gmpy2.log(2 * gmpy2.sin(d / 2))
        return acc


@dataclass(frozen=True)
class SandwichBounds:
    """Bounds for the smallest singular value of a tall matrix from its
    square row-submatrices; ``upper`` is None when the subset budget was
    exhausted (the lower bound remains valid)."""

    lower: gmpy2.mpfr
    upper: gmpy2.mpfr | None
    complete: bool
    subsets_used: int


def rectangular_sandwich(ctx: PrecisionContext, m: Matrix,
                         row_subset_budget: int = 10_000) -> SandwichBounds:
    """max_S sigma_n(M_S) <= sigma_n(M) <= sqrt(sum_S sigma_n(M_S)^2) over
    square row-subsets S of a tall matrix."""
    rows, ncols = m.shape
    if rows < ncols:
        raise ConfigurationError("sandwich needs at least as many rows as columns")
    if row_subset_budget < 1:
        raise ConfigurationError("row_subset_budget must be positive")
    with ctx.active(32):
        total = comb(rows, ncols)
        complete = total <= row_subset_budget
        lower = gmpy2.mpfr(0)
        upper_sq = gmpy2.mpfr(0)
        used = 0
        for subset in itertools.islice(itertools.combinations(range(rows), ncols),
                                       row_subset_budget):
            sub = Matrix(cols=tuple(tuple(c[i] for i in subset) for c in m.cols))
            s_min = svd_jacobi(ctx, sub).sigma_min
            if s_min > lower:
                lower = s_min
            upper_sq += s_min * s_min
            used += 1
        return SandwichBounds(lower=lower,
                              upper=gmpy2.sqrt(upper_sq) if complete else None,
                              complete=complete, subsets_used=used)


# ---------------------------------------------------------------------------
# CSV snapshots


def matrix_to_csv(ctx: PrecisionContext, m: Matrix, path) -> None:
    """Write the matrix as CSV, one row per line, each cell "re,im".

    gmpy2's str() emits the shortest decimal string that parses back to the
    identical binary value at the entry's own precision, so the file is both
    diff-able and lossless.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([m.nrows, m.ncols, ctx.bits])
        with ctx.active(32):
            # widen each entry (exact) to the precision the reader will use,
            # so shortest-string round-tripping is bit-faithful
            for i in range(m.nrows):
                writer.writerow(
                    [f"{gmpy2.mpfr(x.real)!s},{gmpy2.mpfr(x.imag)!s}"
                     for x in m.row(i)])


def matrix_from_csv(ctx: PrecisionContext, path) -> Matrix:
    """Read a matrix written by :func:`matrix_to_csv`."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        nrows, ncols = int(header[0]), int(header[1])
        with ctx.active(32):
            rows = []
            for rec in reader:
                if len(rec) != ncols:
                    raise ConfigurationError("malformed matrix CSV row")
                row = []
                for cell in rec:
                    re_s, im_s = cell.split(",")
                    row.append(gmpy2.mpc(gmpy2.mpfr(re_s), gmpy2.mpfr(im_s)))
                rows.append(row)
        if len(rows) != nrows:
            raise ConfigurationError("matrix CSV truncated")
        return matrix_from_rows(rows)
