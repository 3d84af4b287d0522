"""Closed-form conditioning rates and bounds for contiguous Fourier
submatrices and unit-circle Vandermonde systems, plus the node-gap regime
classification that decides which estimate applies.

All formulas reduce to the log-cotangent integral, evaluated through the
Clausen closed form; nothing here touches a matrix.
"""

from dataclasses import dataclass
from enum import Enum

import gmpy2

from .clausen import catalan, log_cot_integral
from .errors import DomainError, RegimeError
from .precision import PrecisionContext

__all__ = [
    "Regime",
    "BoundsReport",
    "thm_main_rate",
    "corollary_contiguous",
    "catalan_cap",
    "barnett_lower",
    "regime_classify",
    "bounds_report",
]


class Regime(Enum):
    """Node-gap classification for n nodes spaced eps apart on the circle."""

    FULL_CIRCLE = "full_circle"
    NARROW_GAP = "narrow_gap"
    GENERAL = "general"


def thm_main_rate(ctx: PrecisionContext, n: int, eps, c_choice=1) -> gmpy2.mpfr:
    """Per-degree growth rate of the inverse norm for geometric nodes
    e^{i j eps}, j = 0..n:

        (4 / (n eps)) * integral_0^{n eps / 4} log cot(phi) dphi
            - c_choice * log(n) / n

    ``c_choice`` interpolates the proven constant range [1/2, 1]; 1 is the
    equality case.  Requires (n+1) eps < 2 pi (the nodes must not wrap).
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    with ctx.active(8):
        c = gmpy2.mpfr(c_choice)
        if not (gmpy2.mpfr("0.5") <= c <= 1):
            raise DomainError(f"C must lie in [1/2, 1], got {c_choice}")
        e = gmpy2.mpfr(eps)
        two_pi = 2 * gmpy2.const_pi()
        if not (e > 0 and (n + 1) * e < two_pi):
            raise RegimeError(
                f"nodes wrap the circle: (n+1)*eps = {float((n + 1) * e):.6g} "
                f"must stay below 2*pi")
        integral = log_cot_integral(ctx, n * e / 4)
        return 4 / (n * e) * integral - c * gmpy2.log(n) / n


def corollary_contiguous(ctx: PrecisionContext, N: int, size_s: int,
                         size_t: int, both_contiguous: bool = True) -> gmpy2.mpfr:
    """Upper bound on log kappa of an N-point Fourier submatrix with row and
    column blocks of the given sizes, the larger filling fraction alpha:

        (2N / pi) * integral_0^{alpha pi / 2} log cot(phi) dphi
            [ - (1/2) log N   when both index sets are contiguous ]
    """
    if not (1 <= size_s <= N and 1 <= size_t <= N):
        raise DomainError(f"sizes must lie in [1, {N}]")
    with ctx.active(8):
        alpha = gmpy2.mpfr(max(size_s, size_t)) / N
        integral = log_cot_integral(ctx, alpha * gmpy2.const_pi() / 2)
        bound = 2 * N / gmpy2.const_pi() * integral
        if both_contiguous:
            bound -= gmpy2.log(N) / 2
        return bound


def catalan_cap(ctx: PrecisionContext, N: int,
                both_contiguous: bool = True) -> gmpy2.mpfr:
    """The alpha-independent cap 2GN/pi (G = Catalan's constant), i.e. the
    corollary bound at its maximizing alpha = 1/2; the (1/2) log N sharpening
    again applies only to doubly contiguous blocks."""
    if N < 2:
        raise DomainError(f"need N >= 2, got {N}")
    with ctx.active(8):
        cap = 2 * catalan(ctx) * N / gmpy2.const_pi()
        if both_contiguous:
            cap -= gmpy2.log(N) / 2
        return cap


def barnett_lower(ctx: PrecisionContext, p: int, q: int, N: int) -> gmpy2.mpfr:
    """Lower bound on log kappa of any contiguous p x q submatrix:
    (pi/2) (min(p, q) - p q / N)."""
    if not (1 <= p <= N and 1 <= q <= N):
        raise DomainError(f"sizes must lie in [1, {N}]")
    with ctx.active(8):
        return gmpy2.const_pi() / 2 * (min(p, q) - gmpy2.mpfr(p) * q / N)


def regime_classify(n: int, eps) -> Regime:
    """Which estimate regime n nodes spaced eps apart fall into, by the size
    of the node-free gap g = 2 pi - n eps:

        g <= 2 eps          -> FULL_CIRCLE
        2 eps < g < 2 sqrt(eps) -> NARROW_GAP
        otherwise           -> GENERAL

    Clauses are tested in that order, so boundary values land in the
    earlier, more special regime.
    """
    e = gmpy2.mpfr(eps)
    gap = 2 * gmpy2.const_pi() - n * e
    if not (e > 0 and gap > 0):
        raise RegimeError(f"need 0 < eps and n*eps < 2*pi, got n={n}, eps={eps}")
    if gap <= 2 * e:
        return Regime.FULL_CIRCLE
    if gap < 2 * gmpy2.sqrt(e):
        return Regime.NARROW_GAP
    return Regime.GENERAL


@dataclass(frozen=True)
class BoundsReport:
    """Every closed-form estimate for one contiguous submatrix instance."""

    thm_main: gmpy2.mpfr
    cor_contiguous: gmpy2.mpfr
    catalan_cap: gmpy2.mpfr
    barnett: gmpy2.mpfr
    regime: Regime
    alpha: gmpy2.mpfr


def bounds_report(ctx: PrecisionContext, N: int, size_s: int, size_t: int,
                  both_contiguous: bool = True, c_choice=1) -> BoundsReport:
    """Assemble all bounds for a p x q contiguous Fourier submatrix of F_N.

    The rate comparison point uses the substitution n = alpha N - 1,
    eps = 2 pi / N (the submatrix's implied geometric node family).
    """
    with ctx.active(8):
        p_big = max(size_s, size_t)
        alpha = gmpy2.mpfr(p_big) / N
        eps = 2 * gmpy2.const_pi() / N
        n = p_big - 1
        thm = thm_main_rate(ctx, n, eps, c_choice) if n >= 1 else gmpy2.mpfr(0)
        return BoundsReport(
            thm_main=thm,
            cor_contiguous=corollary_contiguous(ctx, N, size_s, size_t,
                                                both_contiguous),
            catalan_cap=catalan_cap(ctx, N, both_contiguous),
            barnett=barnett_lower(ctx, size_s, size_t, N),
            regime=regime_classify(n, eps) if n >= 1 else Regime.FULL_CIRCLE,
            alpha=alpha,
        )
