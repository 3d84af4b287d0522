import math
import random

import gmpy2
import pytest

from vandercond import (
    ConfigurationError,
    DomainError,
    PoleError,
    PreconditionError,
    ctx_new,
    envelopes,
    family,
    potential_U,
    potential_Uk,
)
from vandercond.potentials import (
    curvature_ratio_bounds,
    riemann_estimate_crossing,
    riemann_estimate_halfcircle,
    u_midpoint_and_edge,
    uk_diagonal_estimate,
)


def test_family_validation(ctx128):
    fam = family(ctx128, 10, "0.1")
    assert fam.n == 10
    with ctx128.active():
        assert abs(fam.alpha - 1 / (2 * gmpy2.const_pi())) < gmpy2.exp2(-100)
    # n = 0 is a single node at angle zero: U(pi) = -log|e^{i pi} - 1| = -log 2
    lone = family(ctx128, 0, "0.5")
    with ctx128.active():
        assert abs(potential_U(ctx128, lone, gmpy2.const_pi()) + gmpy2.log(2)) \
            < gmpy2.exp2(-96)
    with pytest.raises(ConfigurationError):
        family(ctx128, -1, "0.1")
    with pytest.raises(ConfigurationError):
        family(ctx128, 100, "0.1")  # (n+1) eps > 2 pi
    with pytest.raises(ConfigurationError):
        family(ctx128, 3, 0)


def test_potential_matches_plain_log_sum(ctx192):
    # module computes log of a distance product; re-derive as a sum of logs
    fam = family(ctx192, 17, "0.21")
    rng = random.Random(5)
    with ctx192.active():
        e = gmpy2.mpfr("0.21")
        for _ in range(8):
            theta = gmpy2.mpfr(rng.uniform(0.03, 6.2))
            z = gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta))
            acc = gmpy2.mpfr(0)
            for j in range(18):
                w = gmpy2.mpc(gmpy2.cos(j * e), gmpy2.sin(j * e))
                acc -= gmpy2.log(abs(z - w))
            assert abs(potential_U(ctx192, fam, theta) - acc) < gmpy2.exp2(-150)


def test_potential_pole_and_uk(ctx128):
    fam = family(ctx128, 6, "0.4")
    with pytest.raises(PoleError):
        potential_U(ctx128, fam, "0.8")  # node j = 2
    with ctx128.active():
        # U_k removes node k: U_k(theta) = U(theta) + log|z - z_k|
        theta = gmpy2.mpfr("2.7")
        z = gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta))
        zk = gmpy2.mpc(gmpy2.cos(gmpy2.mpfr("1.2")), gmpy2.sin(gmpy2.mpfr("1.2")))
        expect = potential_U(ctx128, fam, theta) + gmpy2.log(abs(z - zk))
        assert abs(potential_Uk(ctx128, fam, 3, theta) - expect) < gmpy2.exp2(-96)
        # removing the node un-poles it
        assert gmpy2.is_finite(potential_Uk(ctx128, fam, 2, "0.8"))
    with pytest.raises(DomainError):
        potential_Uk(ctx128, fam, 7, "2.7")


def test_riemann_estimates_hold_their_bounds(ctx128):
    rng = random.Random(11)
    with ctx128.active():
        for _ in range(10):
            a = rng.uniform(0, 2.5)
            b = rng.uniform(a + 0.1, 3.14)
            m = rng.randint(1, 200)
            est, bound = riemann_estimate_halfcircle(ctx128, a, b, m)
            step = (gmpy2.mpfr(b) - a) / m
            direct = sum(gmpy2.log(2 * gmpy2.sin((gmpy2.mpfr(a) + j * step) / 2))
                         for j in range(1, m + 1))
            assert bound == gmpy2.mpfr(3) / 2
            assert abs(direct - est) <= bound
        for _ in range(10):
            a = rng.uniform(0, 3.0)
            b = rng.uniform(3.3, 6.2)
            m = rng.randint(1, 200)
            est, bound = riemann_estimate_crossing(ctx128, a, b, m)
            step = (gmpy2.mpfr(b) - a) / (m + 1)
            direct = sum(gmpy2.log(2 * gmpy2.sin((gmpy2.mpfr(a) + j * step) / 2))
                         for j in range(1, m + 1))
            assert bound == 5
            assert abs(direct - est) <= bound
    with pytest.raises(DomainError):
        riemann_estimate_halfcircle(ctx128, 0, 4, 5)  # b beyond pi
    with pytest.raises(DomainError):
        riemann_estimate_crossing(ctx128, 1, 2, 5)  # pi not inside


def test_envelopes_pinch_the_potential(ctx128):
    fam = family(ctx128, 24, 2 * math.pi / 40)
    env = envelopes(ctx128, fam)
    with ctx128.active():
        assert 0 < env.M_w <= env.M_n
        lo = fam.eps * (fam.n + 1)
        hi = 2 * gmpy2.const_pi() - fam.eps
        tol = gmpy2.exp2(-96)
        for i in range(101):
            theta = lo + (hi - lo) * i / 100
            u = potential_U(ctx128, fam, theta)
            assert env.g_w(theta) <= u + tol
            assert u <= env.g_n(theta) + tol
        # tangent at the arc midpoint
        assert abs(env.g_w(env.center) - potential_U(ctx128, fam, env.center)) \
            < gmpy2.exp2(-96)
    with pytest.raises(PreconditionError):
        envelopes(ctx128, family(ctx128, 30, 2 * math.pi / 31.5))


def test_closed_form_estimates_track_direct_values(ctx128):
    # diagonal, midpoint and edge estimates stay within their O(1) bands
    with ctx128.active():
        for (n, eps) in ((16, 0.12), (40, 0.07), (9, 0.3)):
            fam = family(ctx128, n, eps)
            for k in (0, n // 2, n):
                est = uk_diagonal_estimate(ctx128, fam, k)
                direct = potential_Uk(ctx128, fam, k, k * fam.eps)
                assert abs(est - direct) <= gmpy2.mpfr("1.87")
            mid_est, edge_est = u_midpoint_and_edge(ctx128, fam)
            mid = potential_U(ctx128, fam, fam.eps * n / 2 + gmpy2.const_pi())
            edge = potential_U(ctx128, fam, fam.eps * (n + 1))
            assert abs(mid_est - mid) <= gmpy2.mpfr("1.11")
            assert abs(edge_est - edge) <= gmpy2.mpfr("1.11")


def test_curvature_ratio_band(ctx128):
    with ctx128.active():
        for (n, eps) in ((24, 0.1), (60, 0.05), (12, 0.35)):
            ratio, lo, hi = curvature_ratio_bounds(ctx128, family(ctx128, n, eps))
            assert lo <= ratio <= hi
