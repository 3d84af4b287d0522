"""The Clausen function Cl, the kernel f(x) = -log|2 sin(x/2)|, Catalan's
constant, and the log-cotangent integral, together with an identity scan.

Cl(theta) = sum_{k>=1} sin(k theta)/k^2 = -Integral_0^theta log|2 sin(x/2)| dx.

Evaluation reduces the argument to [0, pi] (periodicity plus oddness
Cl(2 pi - x) = -Cl(x)) and uses the expansion around zero

    Cl(t) = t - t log t + sum_{m>=1} zeta(2m) / (m (2m+1)) * t^(2m+1) / (2 pi)^(2m)

whose term ratio is (t / 2 pi)^2 <= 1/4 on the reduced range, so bits/2 + a few
terms always reach 2^(-bits-8) absolute truncation error.  The zeta(2m) values
come from mpmath (computed via Bernoulli numbers) and are cached per precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import mpmath

from .errors import DomainError, PoleError
from .precision import PrecisionContext

# Guard bits for internal accumulations; generous relative to every stated
# tolerance (worst contract is 2^(-bits+16) absolute).
_GUARD = 32

_zeta_cache: dict[tuple[int, int], gmpy2.mpfr] = {}


def _mpfr_from_mpmath(x: "mpmath.mpf") -> gmpy2.mpfr:
    """Lossless conversion of an mpmath float into the active gmpy2 context."""
    sign, man, exp, _ = x._mpf_
    r = gmpy2.mul_2exp(gmpy2.mpfr(man), exp) if exp >= 0 else gmpy2.div_2exp(
        gmpy2.mpfr(man), -exp
    )
    return -r if sign else r


def _zeta_even(two_m: int, workbits: int) -> gmpy2.mpfr:
    """zeta(two_m) at workbits precision (cached)."""
    key = (two_m, workbits)
    val = _zeta_cache.get(key)
    if val is None:
        with mpmath.workprec(workbits + 8):
            z = mpmath.zeta(two_m)
            val = _mpfr_from_mpmath(z)
        _zeta_cache[key] = val
    return val


def f_kernel(ctx: PrecisionContext, x) -> gmpy2.mpfr:
    """f(x) = -log(2 sin(x/2)) for x in (0, 2 pi); decreasing on (0, pi]."""
    with ctx.active(_GUARD):
        t = gmpy2.mpfr(x)
        two_pi = 2 * gmpy2.const_pi()
        if not (0 < t < two_pi):
            if t == 0 or t == two_pi:
                raise PoleError(f"f has a logarithmic pole at x = {x}")
            raise DomainError(f"f requires x in (0, 2*pi), got {x}")
        s = gmpy2.sin(t / 2)
        if s <= 0:
            # Only reachable by rounding at the very ends of the interval.
            raise PoleError(f"f has a logarithmic pole at x = {x}")
        return -gmpy2.log(2 * s)


def _clausen_0_pi(theta: gmpy2.mpfr, bits: int) -> gmpy2.mpfr:
    """Series evaluation for theta in [0, pi], under an active context."""
    if theta == 0:
        return gmpy2.mpfr(0)
    two_pi = 2 * gmpy2.const_pi()
    t2 = (theta / two_pi) ** 2
    acc = gmpy2.mpfr(0)
    power = theta  # theta * t2^m as the loop proceeds
    cutoff = gmpy2.exp2(-bits - 8)
    m = 0
    while True:
        m += 1
        power *= t2
        term = _zeta_even(2 * m, bits + _GUARD) * power / (m * (2 * m + 1))
        acc += term
        # term ratio <= 1/4, so the tail is < term/3 once terms decay.
        if term < cutoff:
            break
    return theta - theta * gmpy2.log(theta) + acc


def clausen(ctx: PrecisionContext, theta) -> gmpy2.mpfr:
    """Cl(theta) for any finite theta, to <= 2^(-bits+16) absolute error."""
    with ctx.active(_GUARD):
        t = gmpy2.mpfr(theta)
        if not gmpy2.is_finite(t):
            raise DomainError(f"Cl requires a finite angle, got {theta!r}")
        two_pi = 2 * gmpy2.const_pi()
        # Reduce mod 2*pi into [0, 2*pi).
        t = t - two_pi * gmpy2.floor(t / two_pi)
        if t > gmpy2.const_pi():
            return -_clausen_0_pi(two_pi - t, ctx.bits)
        return _clausen_0_pi(t, ctx.bits)


def catalan(ctx: PrecisionContext) -> gmpy2.mpfr:
    """Catalan's constant G = sum_{k>=0} (-1)^k/(2k+1)^2 = Cl(pi/2)."""
    with ctx.active(_GUARD):
        return gmpy2.const_catalan()


def log_cot_integral(ctx: PrecisionContext, x) -> gmpy2.mpfr:
    """Integral_0^x log cot(phi) dphi for x in [0, pi/2].

    Computed through the closed form (Cl(2x) - Cl(pi + 2x)) / 2; nonnegative,
    maximal at x = pi/4 where it equals Catalan's constant.
    """
    with ctx.active(_GUARD):
        t = gmpy2.mpfr(x)
        half_pi = gmpy2.const_pi() / 2
        if not (0 <= t <= half_pi):
            raise DomainError(f"log-cot integral requires x in [0, pi/2], got {x}")
        return (clausen(ctx, 2 * t) - clausen(ctx, gmpy2.const_pi() + 2 * t)) / 2


@dataclass(frozen=True)
class ClausenGridReport:
    """Worst absolute residuals of the standard identities over a grid.

    ``ratio_residual`` is the worst distance of a(1-a)log(2/a)/Cl(a pi) outside
    [1/pi, 2/5] (zero when the scan stays inside), and ``diff_quotient_residual``
    is the worst violation of the difference-quotient bounds (zero when they
    hold).  The exact identities report plain absolute residuals.
    """

    oddness_residual: gmpy2.mpfr
    duplication_residual: gmpy2.mpfr
    diff_quotient_residual: gmpy2.mpfr
    ratio_residual: gmpy2.mpfr
    ratio_min: gmpy2.mpfr
    ratio_max: gmpy2.mpfr


def clausen_identity_scan(ctx: PrecisionContext, grid_size: int) -> ClausenGridReport:
    """Evaluate the worst residual of each standard Clausen identity.

    Over a uniform grid of ``grid_size`` points: oddness Cl(2 pi - x) = -Cl(x);
    the duplication identity Cl(x) - 2 Cl(pi + x/2) = 2 Cl(x/2); the forward /
    backward difference-quotient bounds

        |(Cl(x+e) - Cl(x))/e + log x|          <= e/(2x)        + log(pi/2),
        |(Cl(x) - Cl(x-e))/e + log(2 pi - x)|  <= e/(2(2pi-x))  + log(pi/2);

    and the ratio a(1-a)log(2/a)/Cl(a pi), which must stay in [1/pi, 2/5]
    for a in (0, 1).
    """
    if grid_size < 8:
        raise DomainError(f"grid_size must be >= 8, got {grid_size}")
    with ctx.active(_GUARD):
        pi = gmpy2.const_pi()
        two_pi = 2 * pi
        zero = gmpy2.mpfr(0)
        odd_worst = zero
        dup_worst = zero
        dq_worst = zero
        ratio_lo = gmpy2.inf()
        ratio_hi = -gmpy2.inf()
        log_half_pi = gmpy2.log(pi / 2)
        for i in range(1, grid_size + 1):
            x = two_pi * i / (grid_size + 1)
            clx = clausen(ctx, x)
            odd_worst = max(odd_worst, abs(clausen(ctx, two_pi - x) + clx))
            dup_worst = max(
                dup_worst,
                abs(clx - 2 * clausen(ctx, pi + x / 2) - 2 * clausen(ctx, x / 2)),
            )
            # Difference quotients, at a coarse and a fine step.
            for e in (x / 8, gmpy2.mpfr("0.0078125")):
                if 0 < x <= pi - e:
                    q = (clausen(ctx, x + e) - clx) / e + gmpy2.log(x)
                    bound = e / (2 * x) + log_half_pi
                    dq_worst = max(dq_worst, abs(q) - bound)
                e2 = (two_pi - x) / 8
                for ee in (e2, gmpy2.mpfr("0.0078125")):
                    if pi + ee <= x < two_pi:
                        q = (clx - clausen(ctx, x - ee)) / ee + gmpy2.log(two_pi - x)
                        bound = ee / (2 * (two_pi - x)) + log_half_pi
                        dq_worst = max(dq_worst, abs(q) - bound)
        for i in range(1, grid_size + 1):
            a = gmpy2.mpfr(i) / (grid_size + 1)
            r = a * (1 - a) * gmpy2.log(2 / a) / clausen(ctx, a * pi)
            ratio_lo = min(ratio_lo, r)
            ratio_hi = max(ratio_hi, r)
        ratio_residual = max(
            zero, max(1 / pi - ratio_lo, ratio_hi - gmpy2.mpfr(2) / 5)
        )
        return ClausenGridReport(
            oddness_residual=odd_worst,
            duplication_residual=dup_worst,
            diff_quotient_residual=max(zero, dq_worst),
            ratio_residual=ratio_residual,
            ratio_min=ratio_lo,
            ratio_max=ratio_hi,
        )
