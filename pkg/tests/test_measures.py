import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandercond import (
    PoleError,
    RegularityParams,
    arc_uniform,
    circle_uniform,
    ctx_new,
    discrete_uniform,
    disk_uniform,
    ks_distance,
    lagrange_sup_rate,
    node_set,
    potential,
    potential_diff_bound,
    rate_delta,
    regularity_check,
    unit_point,
)

TWO_G_OVER_PI = "0.583121808061637560276768912936789837728132"
FOUR_G_OVER_PI = "1.16624361612327512055353782587357967545626"


def test_circle_potential_closed_form(ctx128):
    circle = circle_uniform(ctx128)
    with ctx128.active():
        tol = gmpy2.exp2(-96)
        assert abs(potential(ctx128, circle, 2) + gmpy2.log(2)) < tol
        assert abs(potential(ctx128, circle, gmpy2.mpc(0, -5)) + gmpy2.log(5)) < tol
        assert potential(ctx128, circle, gmpy2.mpc("0.25", "0.1")) == 0


def test_arc_potential_pinned_values(ctx192):
    # [0, pi] arc: at z = 2 the half integrals pair up to -log 2; at the
    # midpoint of the complementary arc the value is -2G/pi
    with ctx192.active():
        arc = arc_uniform(ctx192, 0, gmpy2.const_pi())
        tol = gmpy2.exp2(-90)
        assert abs(potential(ctx192, arc, 2) + gmpy2.log(2)) < tol
        at_minus_i = potential(ctx192, arc, gmpy2.mpc(0, -1))
        assert abs(at_minus_i + gmpy2.mpfr(TWO_G_OVER_PI)) < gmpy2.mpfr("1e-40")


def test_disk_and_discrete_potentials(ctx128):
    with ctx128.active():
        disk = disk_uniform(ctx128, 0, 1)
        # outside a disk the potential matches a point charge at its center
        assert abs(potential(ctx128, disk, 3) + gmpy2.log(3)) < gmpy2.exp2(-96)
        # at the center it exceeds the boundary value by exactly 1/2
        assert abs(potential(ctx128, disk, 0) - gmpy2.mpfr(1) / 2) < gmpy2.exp2(-96)
        atoms = [unit_point(ctx128, t) for t in (0, 2, 4)]
        mu = discrete_uniform(ctx128, atoms)
        z = gmpy2.mpc(0, "0.5")
        direct = -sum(gmpy2.log(abs(z - w)) for w in atoms) / 3
        assert abs(potential(ctx128, mu, z) - direct) < gmpy2.exp2(-96)
        with pytest.raises(PoleError):
            potential(ctx128, mu, atoms[0])


atom_sets = st.lists(st.floats(min_value=0.0, max_value=6.28),
                     min_size=2, max_size=6)


@settings(max_examples=25, deadline=None)
@given(atom_sets, atom_sets)
def test_ks_distance_is_a_metric(angles_a, angles_b):
    ctx = ctx_new(128)
    with ctx.active():
        mu = discrete_uniform(ctx, [unit_point(ctx, t) for t in angles_a])
        nu = discrete_uniform(ctx, [unit_point(ctx, t) for t in angles_b])
        centers = tuple(mu.atoms) + tuple(nu.atoms)
        d_ab = ks_distance(ctx, mu, nu, extra_centers=centers).value
        d_ba = ks_distance(ctx, nu, mu, extra_centers=centers).value
        d_aa = ks_distance(ctx, mu, mu, extra_centers=centers).value
        assert gmpy2.is_zero(d_aa)
        assert d_ab == d_ba
        assert 0 <= d_ab <= 1


def test_ks_distance_arc_vs_circle(ctx128):
    # a half arc against the full circle: some ball captures the whole
    # missing half, so the discrepancy reaches at least 1/4 and stays below 1
    with ctx128.active():
        arc = arc_uniform(ctx128, 0, gmpy2.const_pi())
        rep = ks_distance(ctx128, arc, circle_uniform(ctx128))
        assert gmpy2.mpfr("0.25") <= rep.value < 1
        # reported witness reproduces the reported value
        assert rep.witness_center is not None


def test_rate_delta(ctx128):
    with ctx128.active():
        circle = circle_uniform(ctx128)
        assert abs(rate_delta(ctx128, circle, circle, search_resolution=64)) \
            < gmpy2.exp2(-60)
        arc = arc_uniform(ctx128, 0, gmpy2.const_pi())
        delta = rate_delta(ctx128, arc, circle)
        assert abs(delta - gmpy2.mpfr(FOUR_G_OVER_PI)) < gmpy2.mpfr("1e-10")


def _quarter_arc_setup(ctx):
    with ctx.active():
        ell = gmpy2.const_pi() / 2
        arc = arc_uniform(ctx, 0, ell)
        n = 16
        atoms = [unit_point(ctx, ell * j / (n - 1)) for j in range(n)]
        params = RegularityParams(
            rho1=gmpy2.const_pi() / ell, rho2=gmpy2.mpfr("0.5"),
            C_holder=gmpy2.mpfr("1.5"), alpha_holder=gmpy2.mpfr("0.5"),
            beta_dim=gmpy2.mpfr(1), R=gmpy2.mpfr(1))
        return ell, arc, atoms, params


def test_potential_diff_bound_dominates(ctx128):
    ell, arc, atoms, params = _quarter_arc_setup(ctx128)
    with ctx128.active():
        mu_d = discrete_uniform(ctx128, atoms)
        z = unit_point(ctx128, ell / 2 + gmpy2.const_pi())  # antipode
        bound = potential_diff_bound(ctx128, arc, mu_d, z, params)
        diff = abs(potential(ctx128, mu_d, z) - potential(ctx128, arc, z))
        assert diff <= bound
        # identical measures at positive distance give a zero bound
        assert potential_diff_bound(ctx128, mu_d, mu_d, z, params) == 0


def test_quarter_arc_regularity(ctx128):
    ell, arc, atoms, params = _quarter_arc_setup(ctx128)
    with ctx128.active():
        nodes = node_set(ctx128, [ell * j / 15 for j in range(16)])
        report = regularity_check(ctx128, arc, nodes, params)
        assert report.all_passed(), report
        # a hopeless Hoelder constant must be caught
        bad = RegularityParams(rho1=params.rho1, rho2=params.rho2,
                               C_holder=gmpy2.mpfr("1e-6"),
                               alpha_holder=params.alpha_holder,
                               beta_dim=params.beta_dim, R=params.R)
        assert not regularity_check(ctx128, arc, nodes, bad).holder.passed


def test_lagrange_sup_rate_trend(ctx128):
    # equispaced-on-arc nodes: the per-degree sup rate climbs toward the
    # arc-to-circle rate gap from below
    with ctx128.active():
        pi = gmpy2.const_pi()
        delta = gmpy2.mpfr(FOUR_G_OVER_PI)
        gaps = []
        for n in (16, 32, 64):
            nodes = node_set(ctx128, [pi * j / n for j in range(n + 1)])
            rate = lagrange_sup_rate(ctx128, nodes, grid_size=512)
            assert 0 < rate < delta
            gaps.append(delta - rate)
        assert gaps[0] > gaps[1] > gaps[2]
