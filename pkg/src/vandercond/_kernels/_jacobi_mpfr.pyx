# cython: language_level=3
"""Compiled one-sided Jacobi kernel on raw MPFR limbs.

Same contract as jacobi_py.jacobi_orthogonalize, but the sweep loop runs on
mpfr pointers extracted once from fresh gmpy2 mpc objects, eliminating the
per-operation interpreter dispatch and temporary-object churn of the pure
backend.  The fresh objects are installed into the caller's lists up front,
so mutating their limbs in place afterwards is safe: nothing else holds a
reference to them.
"""

cimport gmpy2
from gmpy2 cimport (
    MPC,
    MPFR,
    MPFR_RNDN,
    GMPy_MPC_New,
    GMPy_MPFR_New,
    mpc,
    mpc_ptr,
    mpfr,
    mpfr_prec_t,
    mpfr_ptr,
    mpfr_rnd_t,
    mpfr_t,
)
from libc.stdlib cimport free, malloc

cdef extern from "mpfr.h":
    void mpfr_init2(mpfr_ptr x, mpfr_prec_t prec) nogil
    void mpfr_clear(mpfr_ptr x) nogil
    void mpfr_swap(mpfr_ptr x, mpfr_ptr y) nogil
    int mpfr_set(mpfr_ptr rop, mpfr_ptr op, mpfr_rnd_t rnd) nogil
    int mpfr_set_ui(mpfr_ptr rop, unsigned long op, mpfr_rnd_t rnd) nogil
    int mpfr_add(mpfr_ptr rop, mpfr_ptr op1, mpfr_ptr op2, mpfr_rnd_t rnd) nogil
    int mpfr_sub(mpfr_ptr rop, mpfr_ptr op1, mpfr_ptr op2, mpfr_rnd_t rnd) nogil
    int mpfr_mul(mpfr_ptr rop, mpfr_ptr op1, mpfr_ptr op2, mpfr_rnd_t rnd) nogil
    int mpfr_div(mpfr_ptr rop, mpfr_ptr op1, mpfr_ptr op2, mpfr_rnd_t rnd) nogil
    int mpfr_fma(mpfr_ptr rop, mpfr_ptr op1, mpfr_ptr op2, mpfr_ptr op3,
                 mpfr_rnd_t rnd) nogil
    int mpfr_fms(mpfr_ptr rop, mpfr_ptr op1, mpfr_ptr op2, mpfr_ptr op3,
                 mpfr_rnd_t rnd) nogil
    int mpfr_sqr(mpfr_ptr rop, mpfr_ptr op, mpfr_rnd_t rnd) nogil
    int mpfr_sqrt(mpfr_ptr rop, mpfr_ptr op, mpfr_rnd_t rnd) nogil
    int mpfr_neg(mpfr_ptr rop, mpfr_ptr op, mpfr_rnd_t rnd) nogil
    int mpfr_abs(mpfr_ptr rop, mpfr_ptr op, mpfr_rnd_t rnd) nogil
    int mpfr_add_ui(mpfr_ptr rop, mpfr_ptr op1, unsigned long op2,
                    mpfr_rnd_t rnd) nogil
    int mpfr_ui_div(mpfr_ptr rop, unsigned long op1, mpfr_ptr op2,
                    mpfr_rnd_t rnd) nogil
    int mpfr_mul_2si(mpfr_ptr rop, mpfr_ptr op1, long op2, mpfr_rnd_t rnd) nogil
    int mpfr_cmp(mpfr_ptr op1, mpfr_ptr op2) nogil
    int mpfr_sgn(mpfr_ptr op) nogil
    int mpfr_zero_p(mpfr_ptr op) nogil
    double mpfr_get_d(mpfr_ptr op, mpfr_rnd_t rnd) nogil

cdef extern from "mpc.h":
    mpfr_ptr mpc_realref(mpc_ptr op) nogil
    mpfr_ptr mpc_imagref(mpc_ptr op) nogil

gmpy2.import_gmpy2()

BACKEND = "compiled"


cdef void _dot_conj(mpfr_ptr *xr, mpfr_ptr *xi, Py_ssize_t p0, Py_ssize_t q0,
                    Py_ssize_t m, mpfr_ptr acc_re, mpfr_ptr acc_im,
                    mpfr_ptr t1) noexcept nogil:
    """acc = sum_i conj(x_p[i]) * x_q[i] over two column slices."""
    cdef Py_ssize_t i
    mpfr_set_ui(acc_re, 0, MPFR_RNDN)
    mpfr_set_ui(acc_im, 0, MPFR_RNDN)
    for i in range(m):
        mpfr_fma(acc_re, xr[p0 + i], xr[q0 + i], acc_re, MPFR_RNDN)
        mpfr_fma(acc_re, xi[p0 + i], xi[q0 + i], acc_re, MPFR_RNDN)
        mpfr_fma(acc_im, xr[p0 + i], xi[q0 + i], acc_im, MPFR_RNDN)
        # acc_im -= xi_p * xr_q, via t1 = xi_p*xr_q - acc_im, then negate.
        mpfr_fms(t1, xi[p0 + i], xr[q0 + i], acc_im, MPFR_RNDN)
        mpfr_neg(acc_im, t1, MPFR_RNDN)


cdef void _rotate_cols(mpfr_ptr *xr, mpfr_ptr *xi, Py_ssize_t p0, Py_ssize_t q0,
                       Py_ssize_t m, mpfr_ptr cc, mpfr_ptr ss, mpfr_ptr pc,
                       mpfr_ptr ps, mpfr_ptr wre, mpfr_ptr wim, mpfr_ptr t1,
                       mpfr_ptr t2) noexcept nogil:
    """(x_p, x_q) <- (c x_p - s w, s x_p + c w), where w = e^{-i phi} x_q
    and e^{-i phi} = pc + i ps."""
    cdef Py_ssize_t i
    for i in range(m):
        mpfr_mul(t1, ps, xi[q0 + i], MPFR_RNDN)
        mpfr_fms(wre, pc, xr[q0 + i], t1, MPFR_RNDN)
        mpfr_mul(t1, ps, xr[q0 + i], MPFR_RNDN)
        mpfr_fma(wim, pc, xi[q0 + i], t1, MPFR_RNDN)

        mpfr_mul(t1, ss, wre, MPFR_RNDN)
        mpfr_fms(t2, cc, xr[p0 + i], t1, MPFR_RNDN)      # new p_re
        mpfr_mul(t1, ss, xr[p0 + i], MPFR_RNDN)
        mpfr_fma(wre, cc, wre, t1, MPFR_RNDN)            # new q_re
        mpfr_swap(xr[p0 + i], t2)
        mpfr_swap(xr[q0 + i], wre)

        mpfr_mul(t1, ss, wim, MPFR_RNDN)
        mpfr_fms(t2, cc, xi[p0 + i], t1, MPFR_RNDN)      # new p_im
        mpfr_mul(t1, ss, xi[p0 + i], MPFR_RNDN)
        mpfr_fma(wim, cc, wim, t1, MPFR_RNDN)            # new q_im
        mpfr_swap(xi[p0 + i], t2)
        mpfr_swap(xi[q0 + i], wim)


cdef void _refresh_norms(mpfr_ptr *xr, mpfr_ptr *xi, Py_ssize_t n,
                         Py_ssize_t m, mpfr_ptr *norms) noexcept nogil:
    cdef Py_ssize_t j, i
    for j in range(n):
        mpfr_set_ui(norms[j], 0, MPFR_RNDN)
        for i in range(m):
            mpfr_fma(norms[j], xr[j * m + i], xr[j * m + i], norms[j], MPFR_RNDN)
            mpfr_fma(norms[j], xi[j * m + i], xi[j * m + i], norms[j], MPFR_RNDN)


def jacobi_orthogonalize(cols, v_cols, prec, conv_exp, max_sweeps):
    """Orthogonalize ``cols`` in place, accumulating rotations into ``v_cols``.

    Contract identical to the pure backend: entries of both column lists are
    replaced with fresh values; returns (sweeps, converged, off_rel).
    """
    cdef Py_ssize_t n = len(cols)
    cdef Py_ssize_t m = len(cols[0]) if n > 0 else 0
    cdef mpfr_prec_t wprec = <mpfr_prec_t>prec
    cdef long cexp = <long>conv_exp
    cdef int cap = <int>max_sweeps

    cdef mpfr_ptr *ar = <mpfr_ptr *>malloc(n * m * sizeof(mpfr_ptr))
    cdef mpfr_ptr *ai = <mpfr_ptr *>malloc(n * m * sizeof(mpfr_ptr))
    cdef mpfr_ptr *vr = <mpfr_ptr *>malloc(n * n * sizeof(mpfr_ptr))
    cdef mpfr_ptr *vi = <mpfr_ptr *>malloc(n * n * sizeof(mpfr_ptr))
    cdef mpfr_ptr *norms = <mpfr_ptr *>malloc(n * sizeof(mpfr_ptr))
    if ar == NULL or ai == NULL or vr == NULL or vi == NULL or norms == NULL:
        free(ar); free(ai); free(vr); free(vi); free(norms)
        raise MemoryError

    cdef Py_ssize_t i, j, p, q, big
    cdef mpfr_ptr tmpp
    cdef mpc fresh
    cdef mpc_ptr csrc
    cdef mpfr norm_obj
    cdef list col, norm_keep = []
    # Install fresh working objects and harvest their limb pointers.  The
    # norm cache also lives in gmpy2 objects so one allocation scheme covers
    # everything; norm_keep pins them for the duration of the call.
    for j in range(n):
        col = <list>(cols[j])
        for i in range(m):
            fresh = GMPy_MPC_New(wprec, wprec, NULL)
            csrc = MPC(<mpc?>col[i])
            mpfr_set(mpc_realref(fresh.c), mpc_realref(csrc), MPFR_RNDN)
            mpfr_set(mpc_imagref(fresh.c), mpc_imagref(csrc), MPFR_RNDN)
            col[i] = fresh
            ar[j * m + i] = mpc_realref(fresh.c)
            ai[j * m + i] = mpc_imagref(fresh.c)
        col = <list>(v_cols[j])
        for i in range(n):
            fresh = GMPy_MPC_New(wprec, wprec, NULL)
            csrc = MPC(<mpc?>col[i])
            mpfr_set(mpc_realref(fresh.c), mpc_realref(csrc), MPFR_RNDN)
            mpfr_set(mpc_imagref(fresh.c), mpc_imagref(csrc), MPFR_RNDN)
            col[i] = fresh
            vr[j * n + i] = mpc_realref(fresh.c)
            vi[j * n + i] = mpc_imagref(fresh.c)
        norm_obj = GMPy_MPFR_New(wprec, NULL)
        norm_keep.append(norm_obj)
        norms[j] = MPFR(norm_obj)

    cdef mpfr_t t1, t2, apq_re, apq_im, r2, thresh2, off2, rr, tau, cc, ss, pc
    mpfr_init2(t1, wprec); mpfr_init2(t2, wprec)
    mpfr_init2(apq_re, wprec); mpfr_init2(apq_im, wprec)
    mpfr_init2(r2, wprec); mpfr_init2(thresh2, wprec); mpfr_init2(off2, wprec)
    mpfr_init2(rr, wprec); mpfr_init2(tau, wprec)
    mpfr_init2(cc, wprec); mpfr_init2(ss, wprec); mpfr_init2(pc, wprec)

    mpfr_set_ui(thresh2, 1, MPFR_RNDN)
    mpfr_mul_2si(thresh2, thresh2, 2 * cexp, MPFR_RNDN)

    cdef int sweeps = 0
    cdef bint converged = False
    cdef bint rotated
    cdef double off_out = 0.0

    with nogil:
        _refresh_norms(ar, ai, n, m, norms)
        while sweeps < cap:
            sweeps += 1
            rotated = False
            mpfr_set_ui(off2, 0, MPFR_RNDN)
            for p in range(n - 1):
                # de Rijk pivoting: swap the largest remaining column into
                # position p.  Data, V, and cache pointers move in lockstep,
                # so every caller slot keeps its (column, v_column) pairing.
                big = p
                for j in range(p + 1, n):
                    if mpfr_cmp(norms[j], norms[big]) > 0:
                        big = j
                if big != p:
                    for i in range(m):
                        tmpp = ar[p * m + i]
                        ar[p * m + i] = ar[big * m + i]
                        ar[big * m + i] = tmpp
                        tmpp = ai[p * m + i]
                        ai[p * m + i] = ai[big * m + i]
                        ai[big * m + i] = tmpp
                    for i in range(n):
                        tmpp = vr[p * n + i]
                        vr[p * n + i] = vr[big * n + i]
                        vr[big * n + i] = tmpp
                        tmpp = vi[p * n + i]
                        vi[p * n + i] = vi[big * n + i]
                        vi[big * n + i] = tmpp
                    tmpp = norms[p]
                    norms[p] = norms[big]
                    norms[big] = tmpp
                for q in range(p + 1, n):
                    if mpfr_zero_p(norms[p]) or mpfr_zero_p(norms[q]):
                        continue
                    _dot_conj(ar, ai, p * m, q * m, m, apq_re, apq_im, t1)
                    mpfr_sqr(r2, apq_re, MPFR_RNDN)
                    mpfr_fma(r2, apq_im, apq_im, r2, MPFR_RNDN)
                    mpfr_mul(t2, norms[p], norms[q], MPFR_RNDN)
                    mpfr_div(t1, r2, t2, MPFR_RNDN)
                    if mpfr_cmp(t1, off2) > 0:
                        mpfr_set(off2, t1, MPFR_RNDN)
                    mpfr_mul(t1, thresh2, t2, MPFR_RNDN)
                    if mpfr_cmp(r2, t1) <= 0:
                        continue
                    rotated = True
                    # Rotation angle from the 2x2 Gram block.
                    mpfr_sqrt(rr, r2, MPFR_RNDN)
                    mpfr_sub(t1, norms[q], norms[p], MPFR_RNDN)
                    mpfr_mul_2si(t2, rr, 1, MPFR_RNDN)
                    mpfr_div(tau, t1, t2, MPFR_RNDN)
                    mpfr_sqr(t1, tau, MPFR_RNDN)
                    mpfr_add_ui(t1, t1, 1, MPFR_RNDN)
                    mpfr_sqrt(t1, t1, MPFR_RNDN)
                    mpfr_abs(t2, tau, MPFR_RNDN)
                    mpfr_add(t1, t1, t2, MPFR_RNDN)
                    mpfr_ui_div(t2, 1, t1, MPFR_RNDN)         # |t|
                    if mpfr_sgn(tau) < 0:
                        mpfr_neg(t2, t2, MPFR_RNDN)           # t
                    # Cache update moves t*r of squared mass from p to q.
                    mpfr_mul(t1, t2, rr, MPFR_RNDN)
                    mpfr_sub(norms[p], norms[p], t1, MPFR_RNDN)
                    mpfr_add(norms[q], norms[q], t1, MPFR_RNDN)
                    # c = 1/sqrt(1+t^2), s = t*c
                    mpfr_sqr(t1, t2, MPFR_RNDN)
                    mpfr_add_ui(t1, t1, 1, MPFR_RNDN)
                    mpfr_sqrt(t1, t1, MPFR_RNDN)
                    mpfr_ui_div(cc, 1, t1, MPFR_RNDN)
                    mpfr_mul(ss, t2, cc, MPFR_RNDN)
                    # e^{-i phi} = conj(apq)/r; its imag part reuses apq_im,
                    # and apq_re / rr serve as the w scratch registers.
                    mpfr_div(pc, apq_re, rr, MPFR_RNDN)
                    mpfr_div(apq_im, apq_im, rr, MPFR_RNDN)
                    mpfr_neg(apq_im, apq_im, MPFR_RNDN)
                    _rotate_cols(ar, ai, p * m, q * m, m, cc, ss,
                                 pc, apq_im, apq_re, rr, t1, t2)
                    _rotate_cols(vr, vi, p * n, q * n, n, cc, ss,
                                 pc, apq_im, apq_re, rr, t1, t2)
            _refresh_norms(ar, ai, n, m, norms)
            if not rotated:
                converged = True
                break
        mpfr_sqrt(off2, off2, MPFR_RNDN)
        off_out = mpfr_get_d(off2, MPFR_RNDN)

    mpfr_clear(t1); mpfr_clear(t2)
    mpfr_clear(apq_re); mpfr_clear(apq_im)
    mpfr_clear(r2); mpfr_clear(thresh2); mpfr_clear(off2)
    mpfr_clear(rr); mpfr_clear(tau)
    mpfr_clear(cc); mpfr_clear(ss); mpfr_clear(pc)
    free(ar); free(ai); free(vr); free(vi); free(norms)
    return sweeps, converged, off_out
