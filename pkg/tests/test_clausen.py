import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandercond import (
    DomainError,
    PoleError,
    catalan,
    clausen,
    clausen_identity_scan,
    ctx_new,
    log_cot_integral,
)
from vandercond.clausen import f_kernel

# mpmath oracles (42 digits), computed independently via Im polylog(2, e^{ix})
CATALAN_G = "0.915965594177219015054603514932384110774149"
CL2_1 = "1.01395913236076850429457433888591468756118"
CL2_2_5 = "0.433598203235532779364732860105077922657946"
CL2_PI_3 = "1.01494160640965362502120255427452028594169"
LOG_COT_PI_8 = "0.7528807525058986029542736643270996394373"


def _close(a, ref_str, tol_exp):
    return abs(a - gmpy2.mpfr(ref_str)) < gmpy2.exp2(tol_exp)


def test_pinned_values(ctx256):
    with ctx256.active():
        pi = gmpy2.const_pi()
        assert _close(clausen(ctx256, pi / 2), CATALAN_G, -130)
        assert _close(clausen(ctx256, 1), CL2_1, -130)
        assert _close(clausen(ctx256, "2.5"), CL2_2_5, -130)
        assert _close(clausen(ctx256, pi / 3), CL2_PI_3, -130)
        assert _close(catalan(ctx256), CATALAN_G, -130)
        assert clausen(ctx256, 0) == 0
        assert abs(clausen(ctx256, pi)) < gmpy2.exp2(-240)


def test_periodicity_and_oddness(ctx192):
    with ctx192.active():
        two_pi = 2 * gmpy2.const_pi()
        for t in ("0.3", "1.7", "2.9", "5.5"):
            x = gmpy2.mpfr(t)
            assert abs(clausen(ctx192, x + two_pi) - clausen(ctx192, x)) \
                < gmpy2.exp2(-170)
            assert abs(clausen(ctx192, -x) + clausen(ctx192, x)) \
                < gmpy2.exp2(-170)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.01, max_value=6.27))
def test_duplication_identity(theta):
    # Cl(x) = 2 Cl(x/2) + 2 Cl(pi + x/2), any x
    ctx = ctx_new(160)
    with ctx.active():
        x = gmpy2.mpfr(theta)
        lhs = clausen(ctx, x)
        rhs = 2 * clausen(ctx, x / 2) + 2 * clausen(ctx, gmpy2.const_pi() + x / 2)
        assert abs(lhs - rhs) < gmpy2.exp2(-128)


def test_kernel_is_clausen_derivative_domain(ctx128):
    with ctx128.active():
        pi = gmpy2.const_pi()
        # f = -log(2 sin(x/2)): zero at pi/3, decreasing on (0, pi]
        assert abs(f_kernel(ctx128, pi / 3)) < gmpy2.exp2(-120)
        assert f_kernel(ctx128, "0.5") > f_kernel(ctx128, "1.5") > f_kernel(ctx128, "3.0")
    with pytest.raises(PoleError):
        f_kernel(ctx128, 0)
    with pytest.raises(DomainError):
        f_kernel(ctx128, 7)


def test_log_cot_integral(ctx256):
    with ctx256.active():
        pi = gmpy2.const_pi()
        # maximal value at pi/4 is exactly Catalan's constant; the series
        # route must agree with MPFR's own constant at full precision
        assert abs(log_cot_integral(ctx256, pi / 4) - catalan(ctx256)) \
            < gmpy2.exp2(-230)
        assert _close(log_cot_integral(ctx256, pi / 4), CATALAN_G, -130)
        assert _close(log_cot_integral(ctx256, pi / 8), LOG_COT_PI_8, -120)
        assert abs(log_cot_integral(ctx256, 0)) < gmpy2.exp2(-240)
        # the area below pi/4 exactly cancels the area above it
        assert abs(log_cot_integral(ctx256, pi / 2)) < gmpy2.exp2(-230)
        # but the integral stays positive strictly inside the interval
        assert 0 < log_cot_integral(ctx256, "1.5") < catalan(ctx256)
    with pytest.raises(DomainError):
        log_cot_integral(ctx256, 2)


def test_identity_scan(ctx128):
    rep = clausen_identity_scan(ctx128, 64)
    assert rep.oddness_residual < gmpy2.exp2(-96)
    assert rep.duplication_residual < gmpy2.exp2(-96)
    assert rep.diff_quotient_residual == 0
    assert rep.ratio_residual == 0
    with ctx128.active():
        assert gmpy2.mpfr(1) / gmpy2.const_pi() <= rep.ratio_min
        assert rep.ratio_max <= gmpy2.mpfr(2) / 5
    with pytest.raises(DomainError):
        clausen_identity_scan(ctx128, 4)
