import gmpy2
import pytest

from vandercond import ConfigurationError, ctx_new, unit_point
from vandercond.precision import DEFAULT_BITS, MIN_BITS, PrecisionContext


def test_defaults():
    assert PrecisionContext().bits == DEFAULT_BITS == 512
    assert MIN_BITS == 64


@pytest.mark.parametrize("bad", [0, 63, -128, 2.5, "256", None])
def test_rejects_bad_bits(bad):
    with pytest.raises(ConfigurationError):
        ctx_new(bad)


def test_active_does_not_leak_precision():
    ambient = gmpy2.get_context().precision
    ctx = ctx_new(300)
    with ctx.active():
        assert gmpy2.get_context().precision == 300
        with ctx.active(32):
            assert gmpy2.get_context().precision == 332
        assert gmpy2.get_context().precision == 300
    assert gmpy2.get_context().precision == ambient


def test_scalar_constructors_round_at_ctx_bits():
    ctx = ctx_new(80)
    x = ctx.real("0.1")
    assert x.precision == 80
    z = ctx.complex("0.25", "-3")
    assert z.real.precision == 80
    with ctx.active():
        assert abs(ctx.pi() - gmpy2.const_pi()) == 0
    assert ctx.eps() == gmpy2.exp2(-80)
    assert ctx.eps(16) == gmpy2.exp2(-64)


def test_unit_point_lies_on_circle(ctx256):
    with ctx256.active():
        for theta in ("0", "1.25", "-7.5", "3.14159"):
            z = unit_point(ctx256, gmpy2.mpfr(theta))
            assert abs(gmpy2.norm(z) - 1) < gmpy2.exp2(-250)
    assert unit_point(ctx256, 0) == 1
    with pytest.raises(ConfigurationError):
        unit_point(ctx256, gmpy2.inf())
