"""Lagrange interpolation on unit-circle nodes.

Coefficients of L_k in the monomial basis, exact circle mean-squares via
Parseval, grid-plus-golden-section circle maxima, the phase-adjusted test
vector concentrated on the central node window, and the xi ratio comparing
the full-circle L^2 mass of L_k with its mass on the node-free gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .errors import DegeneracyError, DomainError, RegimeError
from .potentials import EquispacedFamily
from .precision import PrecisionContext, unit_point
from .quadrature import integrate

_GUARD = 32


@dataclass(frozen=True)
class NodeSet:
    """Distinct circle nodes, stored as sorted angles in [0, 2 pi)."""

    angles: tuple
    eps_min: gmpy2.mpfr
    points: tuple

    @property
    def n(self) -> int:
        """Degree: number of nodes minus one."""
        return len(self.angles) - 1


def node_set(ctx: PrecisionContext, angles) -> NodeSet:
    """Validated node set from an iterable of angles (any reals; reduced
    mod 2 pi and sorted).  Coincident nodes raise DegeneracyError."""
    with ctx.active(_GUARD):
        two_pi = 2 * gmpy2.const_pi()
        reduced = []
        for a in angles:
            t = gmpy2.mpfr(a)
            if not gmpy2.is_finite(t):
                raise DomainError(f"node angle must be finite, got {a!r}")
            reduced.append(t - two_pi * gmpy2.floor(t / two_pi))
        if not reduced:
            raise DomainError("a node set needs at least one node")
        reduced.sort()
        gap_floor = gmpy2.exp2(-ctx.bits // 2)
        eps_min = two_pi
        for i in range(len(reduced)):
            gap = (
                reduced[i + 1] - reduced[i]
                if i + 1 < len(reduced)
                else reduced[0] + two_pi - reduced[-1]
            )
            if len(reduced) > 1 and gap < gap_floor:
                raise DegeneracyError(
                    f"coincident nodes at angle {float(reduced[i]):.6g}"
                )
            eps_min = min(eps_min, gap)
        points = tuple(unit_point(ctx, t) for t in reduced)
        return NodeSet(angles=tuple(reduced), eps_min=eps_min, points=points)


def equispaced_node_set(ctx: PrecisionContext, fam: EquispacedFamily) -> NodeSet:
    """The node set {e^{ij eps} : j = 0..n} of an equispaced family."""
    # j * eps must be formed at working precision, not the ambient context
    with ctx.active(_GUARD):
        return node_set(ctx, [j * fam.eps for j in range(fam.n + 1)])


@dataclass(frozen=True)
class LagrangeCoeffs:
    """Monomial coefficients a_0..a_n of L_k: L_k(z_m) = delta_{km}."""

    k: int
    coeffs: tuple

    def __call__(self, z) -> gmpy2.mpc:
        acc = gmpy2.mpc(0)
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc


def lagrange_coeffs(ctx: PrecisionContext, nodes: NodeSet, k: int) -> LagrangeCoeffs:
    """Expand prod_{j != k} (z - z_j)/(z_k - z_j) by incremental convolution."""
    n = nodes.n
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    with ctx.active(_GUARD):
        zk = nodes.points[k]
        coeffs = [gmpy2.mpc(1)]
        denom = gmpy2.mpc(1)
        for j, zj in enumerate(nodes.points):
            if j == k:
                continue
            d = zk - zj
            if d == 0:
                raise DegeneracyError(f"nodes {k} and {j} coincide")
            denom *= d
            # Multiply the running polynomial by (z - z_j).
            nxt = [gmpy2.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= c * zj
            coeffs = nxt
        return LagrangeCoeffs(k=k, coeffs=tuple(c / denom for c in coeffs))


def circle_mean_square(ctx: PrecisionContext, lc: LagrangeCoeffs) -> gmpy2.mpfr:
    """(1/2 pi) Integral |L_k(e^{i theta})|^2 d theta = sum_j |a_j|^2,
    by orthogonality of the monomials on the circle."""
    with ctx.active(_GUARD):
        return sum((gmpy2.norm(a) for a in lc.coeffs), gmpy2.mpfr(0))


def _abs_lagrange(ctx: PrecisionContext, nodes: NodeSet, k: int, theta) -> gmpy2.mpfr:
    """|L_k(e^{i theta})| via the product of chord ratios."""
    z = unit_point(ctx, theta)
    zk = nodes.points[k]
    num = gmpy2.mpfr(1)
    den = gmpy2.mpfr(1)
    for j, zj in enumerate(nodes.points):
        if j == k:
            continue
        num *= gmpy2.norm(z - zj)
        den *= gmpy2.norm(zk - zj)
    return gmpy2.sqrt(num / den)


def max_on_circle(
    ctx: PrecisionContext, nodes: NodeSet, k: int
) -> tuple[gmpy2.mpfr, gmpy2.mpfr]:
    """(argmax, max) of |L_k(e^{i theta})| over the circle.

    Dense scan on a uniform grid of 32(n+1) points — |L_k|' has at most
    2n+1 circle zeros, so the grid cannot straddle a peak — then
    golden-section refinement of the bracketing interval down to a theta
    window of 2^(-bits/4).
    """
    n = nodes.n
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    with ctx.active(_GUARD):
        two_pi = 2 * gmpy2.const_pi()
        m = 32 * (n + 1)
        best_i, best_v = 0, -gmpy2.inf()
        for i in range(m):
            v = _abs_lagrange(ctx, nodes, k, two_pi * i / m)
            if v > best_v:
                best_i, best_v = i, v
        lo = two_pi * (best_i - 1) / m
        hi = two_pi * (best_i + 1) / m
        invphi = (gmpy2.sqrt(gmpy2.mpfr(5)) - 1) / 2
        x1 = hi - invphi * (hi - lo)
        x2 = lo + invphi * (hi - lo)
        f1 = _abs_lagrange(ctx, nodes, k, x1)
        f2 = _abs_lagrange(ctx, nodes, k, x2)
        tol = gmpy2.exp2(-ctx.bits // 4)
        while hi - lo > tol:
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + invphi * (hi - lo)
                f2 = _abs_lagrange(ctx, nodes, k, x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - invphi * (hi - lo)
                f1 = _abs_lagrange(ctx, nodes, k, x1)
        theta_star = (lo + hi) / 2
        return theta_star, max(_abs_lagrange(ctx, nodes, k, theta_star), best_v)


def central_window(n: int) -> list[int]:
    """Indices j with |j - floor(n/2)| <= sqrt(n), i.e. (j - floor(n/2))^2 <= n."""
    mid = n // 2
    return [j for j in range(n + 1) if (j - mid) * (j - mid) <= n]


def test_vector(ctx: PrecisionContext, fam: EquispacedFamily) -> list[gmpy2.mpc]:
    """The phase-adjusted unit vector x_j = (-1)^{n-j} e^{ij n eps/2}/sqrt|S|
    supported on the central window S = {j : |j - floor(n/2)| <= sqrt(n)}."""
    n = fam.n
    if n < 4:
        raise DomainError(f"the central window degenerates for n < 4, got n = {n}")
    with ctx.active(_GUARD):
        e = gmpy2.mpfr(fam.eps)
        if not e < 2 * gmpy2.const_pi() * n - 2 * gmpy2.sqrt(e):
            raise RegimeError("test vector needs eps < 2*pi*n - 2*sqrt(eps)")
        window = central_window(n)
        amp = 1 / gmpy2.sqrt(gmpy2.mpfr(len(window)))
        out = [gmpy2.mpc(0)] * (n + 1)
        for j in window:
            phase = unit_point(ctx, j * n * e / 2)
            out[j] = (amp if (n - j) % 2 == 0 else -amp) * phase
        return out


def xi_ratio(ctx: PrecisionContext, fam: EquispacedFamily) -> gmpy2.mpfr:
    """xi = max over the central window k of
    Integral_0^{2 pi} |L_k|^2 / Integral_{n eps + eps}^{2 pi - eps} |L_k|^2.

    The numerator is exact (2 pi times the coefficient mean-square); the
    denominator integrates the chord-product form over the node-free gap,
    which excludes all nodes by an eps margin.
    """
    with ctx.active(_GUARD):
        e = gmpy2.mpfr(fam.eps)
        n = fam.n
        two_pi = 2 * gmpy2.const_pi()
        if not n * e < two_pi - 2 * gmpy2.sqrt(e):
            raise RegimeError("xi ratio needs n*eps < 2*pi - 2*sqrt(eps)")
        nodes = equispaced_node_set(ctx, fam)
        best = -gmpy2.inf()
        slack = gmpy2.exp2(-(ctx.bits // 4) + 8)
        for k in central_window(n):
            num = 2 * gmpy2.const_pi() * circle_mean_square(
                ctx, lagrange_coeffs(ctx, nodes, k)
            )
            den = integrate(
                ctx,
                lambda t: _abs_lagrange(ctx, nodes, k, t) ** 2,
                n * e + e,
                two_pi - e,
            )
            ratio = num / den
            if ratio < 1 - slack:
                raise DegeneracyError(
                    f"gap-interval mass exceeded the full-circle mass at k={k}: "
                    "quadrature inconsistency"
                )
            best = max(best, ratio)
        # The true ratio is >= 1 by inclusion; quadrature error may push the
        # computed one epsilon under it.
        return max(best, gmpy2.mpfr(1))
