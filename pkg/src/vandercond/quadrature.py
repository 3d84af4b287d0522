"""Adaptive Gauss-Legendre integration over real intervals.

Panels use a fixed-order rule whose nodes are interior, so integrable endpoint
singularities (the log-type ones that show up against ``f_kernel``) never get
evaluated directly; adaptive bisection concentrates panels where needed.  A
panel is accepted when the refined estimate (two half-panels) agrees with the
coarse one to the requested relative tolerance, distributed over the interval
proportionally to panel length.
"""

from __future__ import annotations

import gmpy2

from .errors import ConvergenceError, DomainError
from .precision import PrecisionContext

_GUARD = 32
DEFAULT_ORDER = 24

_rule_cache: dict[tuple[int, int], tuple[list, list]] = {}


def gauss_legendre(ctx: PrecisionContext, order: int = DEFAULT_ORDER):
    """Nodes and weights of the ``order``-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of the Legendre polynomial P_order, found by Newton
    iteration from the Chebyshev-angle initial guesses; weights are
    2 / ((1 - x^2) P'_order(x)^2).  Results are cached per (order, bits).
    """
    if order < 2:
        raise DomainError(f"order must be >= 2, got {order}")
    key = (order, ctx.bits)
    cached = _rule_cache.get(key)
    if cached is not None:
        return cached
    with ctx.active(2 * _GUARD):
        pi = gmpy2.const_pi()
        nodes, weights = [], []
        tol = gmpy2.exp2(-ctx.bits - _GUARD)
        for k in range(order // 2 + order % 2):
            x = gmpy2.cos(pi * (4 * k + 3) / (4 * order + 2))
            for _ in range(200):
                # P_order(x) and P_{order-1}(x) by upward recurrence.
                p_prev, p = gmpy2.mpfr(1), x
                for j in range(2, order + 1):
                    p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
                dp = order * (p_prev - x * p) / (1 - x * x)
                dx = p / dp
                x -= dx
                if abs(dx) < tol:
                    break
            else:
                raise ConvergenceError(
                    "Legendre root refinement stalled",
                    diagnostics={"order": order, "bits": ctx.bits, "k": k},
                )
            p_prev, p = gmpy2.mpfr(1), x
            for j in range(2, order + 1):
                p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
            dp = order * (p_prev - x * p) / (1 - x * x)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes.append(x)
            weights.append(w)
        # The loop found the non-negative roots; mirror them (odd orders have
        # one root numerically at zero, which must not be duplicated).
        pairs = sorted(zip(nodes, weights), key=lambda nw: nw[0])
        sym = [(-x, w) for x, w in reversed(pairs) if x > tol] + pairs
        rule = ([x for x, _ in sym], [w for _, w in sym])
        if len(rule[0]) != order:
            raise ConvergenceError(
                "Gauss-Legendre rule construction produced a wrong node count",
                diagnostics={"order": order, "got": len(rule[0])},
            )
    _rule_cache[key] = rule
    return rule


def _panel(f, a, b, nodes, weights):
    half = (b - a) / 2
    mid = (a + b) / 2
    acc = gmpy2.mpfr(0)
    for x, w in zip(nodes, weights):
        acc += w * f(mid + half * x)
    return acc * half


def integrate(
    ctx: PrecisionContext,
    f,
    a,
    b,
    *,
    rel_tol_bits: int | None = None,
    order: int = DEFAULT_ORDER,
    max_depth: int = 220,
) -> gmpy2.mpfr:
    """Integral of ``f`` over [a, b] by adaptive bisection of GL panels.

    Convergence per panel: the two-half refinement must differ from the
    single-panel estimate by at most the relative tolerance (default
    2^(-bits/4), the share of each panel proportional to its length).  Raises
    ConvergenceError when bisection exceeds ``max_depth`` without settling.
    """
    if rel_tol_bits is None:
        rel_tol_bits = ctx.bits // 4
    with ctx.active(_GUARD):
        lo, hi = gmpy2.mpfr(a), gmpy2.mpfr(b)
        if not lo < hi:
            if lo == hi:
                return gmpy2.mpfr(0)
            raise DomainError(f"empty integration interval [{a}, {b}]")
        nodes, weights = gauss_legendre(ctx, order)
        length = hi - lo
        rough = _panel(f, lo, hi, nodes, weights)
        scale = max(abs(rough), gmpy2.exp2(-ctx.bits // 2))
        tol_per_unit = gmpy2.exp2(-rel_tol_bits) * scale / length
        # Absolute floor: a panel whose whole contribution is negligible is
        # accepted outright.  This is what lets integrable endpoint
        # singularities terminate — their per-unit error never shrinks under
        # bisection, but their contribution does.
        floor = gmpy2.exp2(-rel_tol_bits - 10) * scale
        total = gmpy2.mpfr(0)
        # Stack of (lo, hi, coarse_estimate, depth).
        stack = [(lo, hi, rough, 0)]
        while stack:
            pa, pb, coarse, depth = stack.pop()
            pm = (pa + pb) / 2
            left = _panel(f, pa, pm, nodes, weights)
            right = _panel(f, pm, pb, nodes, weights)
            refined = left + right
            diff = abs(refined - coarse)
            if diff <= tol_per_unit * (pb - pa) or (
                diff <= floor and abs(refined) <= floor
            ):
                total += refined
                continue
            if depth >= max_depth:
                raise ConvergenceError(
                    "adaptive quadrature did not converge",
                    diagnostics={
                        "panel": (float(pa), float(pb)),
                        "depth": depth,
                        "difference": float(abs(refined - coarse)),
                    },
                )
            stack.append((pa, pm, left, depth + 1))
            stack.append((pm, pb, right, depth + 1))
        return total
