import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandercond import (
    DegeneracyError,
    DomainError,
    RegimeError,
    circle_mean_square,
    ctx_new,
    equispaced_node_set,
    family,
    lagrange_coeffs,
    max_on_circle,
    node_set,
    unit_point,
)
from vandercond.lagrange import central_window, xi_ratio
from vandercond.lagrange import test_vector as build_test_vector


def _eval(coeffs, z):
    acc = gmpy2.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def test_node_set_basics(ctx128):
    ns = node_set(ctx128, [0, 1.0, 2.5, 4.0])
    assert ns.n == 3
    with ctx128.active():
        assert all(abs(gmpy2.norm(z) - 1) < gmpy2.exp2(-100) for z in ns.points)
    fam = family(ctx128, 5, "0.3")
    es = equispaced_node_set(ctx128, fam)
    assert es.n == 5
    with ctx128.active():
        assert abs(es.points[4] - unit_point(ctx128, gmpy2.mpfr("1.2"))) \
            < gmpy2.exp2(-100)
    with pytest.raises(DomainError):
        node_set(ctx128, [])


angle_sets = st.lists(
    st.floats(min_value=0.0, max_value=6.2), min_size=2, max_size=7
).filter(lambda a: min(abs(x - y) for i, x in enumerate(a)
                       for y in a[i + 1:]) > 0.05 if len(a) > 1 else True)


@settings(max_examples=40, deadline=None)
@given(angle_sets)
def test_cardinal_property(angles):
    # L_k is 1 at node k and 0 at every other node
    ctx = ctx_new(160)
    ns = node_set(ctx, angles)
    with ctx.active():
        tol = gmpy2.exp2(-120)
        for k in range(ns.n + 1):
            lc = lagrange_coeffs(ctx, ns, k)
            for j, z in enumerate(ns.points):
                val = _eval(lc.coeffs, z)
                assert abs(val - (1 if j == k else 0)) < tol


def test_partition_of_unity(ctx192):
    # sum_k L_k interpolates the constant 1, hence is identically 1
    ns = node_set(ctx192, [0.1, 0.9, 2.2, 3.3, 4.1, 5.9])
    with ctx192.active():
        all_coeffs = [lagrange_coeffs(ctx192, ns, k).coeffs
                      for k in range(ns.n + 1)]
        for theta in ("0.47", "2.0", "5.1"):
            z = unit_point(ctx192, gmpy2.mpfr(theta))
            total = sum(_eval(c, z) for c in all_coeffs)
            assert abs(total - 1) < gmpy2.exp2(-150)


def test_mean_square_full_roots_of_unity(ctx192):
    # for the full n-th roots of unity every |a_j| = 1/n: mean square = 1/n
    for n in (4, 9):
        with ctx192.active():
            two_pi = 2 * gmpy2.const_pi()
            ns = node_set(ctx192, [two_pi * j / n for j in range(n)])
            for k in (0, n // 2):
                ms = circle_mean_square(ctx192, lagrange_coeffs(ctx192, ns, k))
                assert abs(ms - gmpy2.mpfr(1) / n) < gmpy2.exp2(-150)


def test_mean_square_matches_discrete_quadrature(ctx192):
    # trapezoid on M >= 2n+1 circle samples is exact for |L_k|^2
    ns = node_set(ctx192, [0.2, 1.1, 2.8, 3.9, 5.3])
    with ctx192.active():
        two_pi = 2 * gmpy2.const_pi()
        m = 4 * (ns.n + 1)
        for k in (0, 3):
            lc = lagrange_coeffs(ctx192, ns, k)
            acc = gmpy2.mpfr(0)
            for i in range(m):
                z = unit_point(ctx192, two_pi * i / m)
                acc += gmpy2.norm(_eval(lc.coeffs, z))
            assert abs(acc / m - circle_mean_square(ctx192, lc)) \
                < gmpy2.exp2(-150)


def test_coincident_nodes_rejected(ctx128):
    # gaps below 2^(-bits/2) are rejected at construction
    with pytest.raises(DegeneracyError):
        node_set(ctx128, [0.5, 0.5 + 2e-40, 3.0])
    ns = node_set(ctx128, [0.5, 3.0])
    with pytest.raises(DomainError):
        lagrange_coeffs(ctx128, ns, 5)


def test_max_on_circle_dominates_node_values(ctx128):
    ns = node_set(ctx128, [0.0, 0.7, 1.9, 3.1, 4.6])
    with ctx128.active():
        for k in (0, 2, 4):
            peak, argmax = max_on_circle(ctx128, ns, k)
            assert peak >= 1 - gmpy2.exp2(-90)  # |L_k(z_k)| = 1
            assert gmpy2.is_finite(argmax)


def test_central_window_and_test_vector(ctx128):
    assert central_window(16) == [4, 5, 6, 7, 8, 9, 10, 11, 12]
    assert central_window(4) == [0, 1, 2, 3, 4]
    fam = family(ctx128, 16, "0.2")
    vec = build_test_vector(ctx128, fam)
    assert len(vec) == 17
    with ctx128.active():
        norm2 = sum((gmpy2.norm(x) for x in vec), gmpy2.mpfr(0))
        assert abs(norm2 - 1) < gmpy2.exp2(-96)
        assert all(vec[j] == 0 for j in range(17) if j not in central_window(16))
    with pytest.raises(DomainError):
        build_test_vector(ctx128, family(ctx128, 3, "0.2"))


def test_xi_ratio_at_least_one(ctx128):
    # full-circle mass over gap-interval mass; the gap carries most of it
    for (n, eps) in ((8, 0.3), (20, 0.12)):
        xi = xi_ratio(ctx128, family(ctx128, n, eps))
        with ctx128.active():
            assert 1 <= xi < 3
    with pytest.raises(RegimeError):
        xi_ratio(ctx128, family(ctx128, 60, "0.1"))
