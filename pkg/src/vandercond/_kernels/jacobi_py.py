"""Pure-Python one-sided Jacobi orthogonalization of complex columns.

Reference implementation of the kernel contract shared with the compiled
backend: repeatedly rotate column pairs (p, q) so that they become orthogonal,
accumulating the same rotations into the columns of V.  On return the columns
of A are mutually orthogonal (to the requested relative threshold), and
A_in @ V == A_out column by column.
"""

from __future__ import annotations

import gmpy2

BACKEND = "python"


def _dot_conj(a, b) -> gmpy2.mpc:
    """sum_i conj(a_i) * b_i."""
    acc = gmpy2.mpc(0)
    for x, y in zip(a, b):
        acc += x.conjugate() * y
    return acc


def _norm2(a) -> gmpy2.mpfr:
    return sum((gmpy2.norm(x) for x in a), gmpy2.mpfr(0))


def jacobi_orthogonalize(cols, v_cols, prec: int, conv_exp: int, max_sweeps: int):
    """Orthogonalize ``cols`` in place; accumulate rotations into ``v_cols``.

    cols: list of n columns, each a list of m gmpy2.mpc entries.
    v_cols: list of n columns of length n (identity on entry).
    prec: working precision in bits for every operation.
    conv_exp: a pair (p, q) counts as orthogonal when
        |a_p^H a_q| <= 2^conv_exp * sqrt(|a_p|^2 |a_q|^2).
    max_sweeps: hard cap on full sweeps.

    Returns (sweeps_used, converged, off_rel) where off_rel is the worst
    relative off-diagonal |a_p^H a_q| / sqrt(...) seen in the final sweep.
    """
    n = len(cols)
    with gmpy2.context(precision=prec):
        thresh2 = gmpy2.exp2(2 * conv_exp)
        norms = [_norm2(c) for c in cols]
        off_rel2 = gmpy2.mpfr(0)
        sweeps = 0
        while sweeps < max_sweeps:
            sweeps += 1
            rotated = False
            off_rel2 = gmpy2.mpfr(0)
            for p in range(n - 1):
                # de Rijk pivoting: bring the largest remaining column to
                # position p (data, V, and cache swap in lockstep, which
                # keeps cols[s] == A_in @ v_cols[s] for every slot s).
                big = max(range(p, n), key=lambda j: norms[j])
                if big != p:
                    cols[p], cols[big] = cols[big], cols[p]
                    v_cols[p], v_cols[big] = v_cols[big], v_cols[p]
                    norms[p], norms[big] = norms[big], norms[p]
                for q in range(p + 1, n):
                    app, aqq = norms[p], norms[q]
                    if app == 0 or aqq == 0:
                        continue
                    apq = _dot_conj(cols[p], cols[q])
                    r2 = gmpy2.norm(apq)
                    off_rel2 = max(off_rel2, r2 / (app * aqq))
                    if r2 <= thresh2 * app * aqq:
                        continue
                    rotated = True
                    r = gmpy2.sqrt(r2)
                    tau = (aqq - app) / (2 * r)
                    t = 1 / (abs(tau) + gmpy2.sqrt(1 + tau * tau))
                    if tau < 0:
                        t = -t
                    c = 1 / gmpy2.sqrt(1 + t * t)
                    s = t * c
                    phase = apq.conjugate() / r  # e^{-i phi}
                    cp, cq, vp, vq = cols[p], cols[q], v_cols[p], v_cols[q]
                    for i in range(len(cp)):
                        w = phase * cq[i]
                        cp[i], cq[i] = c * cp[i] - s * w, s * cp[i] + c * w
                    for i in range(n):
                        w = phase * vq[i]
                        vp[i], vq[i] = c * vp[i] - s * w, s * vp[i] + c * w
                    norms[p] = app - t * r
                    norms[q] = aqq + t * r
            # Full cache refresh once per sweep keeps drift out of the
            # convergence test.
            norms = [_norm2(c) for c in cols]
            if not rotated:
                return sweeps, True, float(gmpy2.sqrt(off_rel2))
        return sweeps, False, float(gmpy2.sqrt(off_rel2))
