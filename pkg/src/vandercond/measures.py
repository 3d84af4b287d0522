"""Probability measures in the plane: log-potentials, KS distance, regularity.

Four measure variants cover the geometry of interest: the uniform measure on
a circular arc, the uniform measure on the whole unit circle, finitely many
equal-weight atoms, and the uniform area measure on a disk.  All are
probability measures.  The logarithmic potential U(z) = integral of
log(1/|z - t|) has classical closed forms for the circle and the disk; on an
arc it reduces to two Clausen evaluations for points of the circle and to
adaptive quadrature elsewhere.

The KS distance here is the sup over all closed disks B(z, r) of
|mu(B) - nu(B)|.  That sup is not finitely computable for arbitrary planar
measures, so ``ks_distance`` enumerates a candidate family (centers at atoms,
arc endpoints, midpoints, and a refinement-controlled grid; radii at the
distances where an atom enters a ball, probed from both sides) and returns a
certified lower bound together with the witness ball.  For measures supported
on the circle the candidate family is rich enough that the result is exact up
to the grid resolution, which is cross-checked in the test suite by dense
random probing.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import gmpy2

from .clausen import clausen
from .errors import (
    ConfigurationError,
    DegeneracyError,
    PoleError,
    PreconditionError,
    UnsupportedMeasureError,
)
from .lagrange import NodeSet
from .precision import PrecisionContext, unit_point
from .quadrature import integrate

ARC_UNIFORM = "arc_uniform"
CIRCLE_UNIFORM = "circle_uniform"
DISCRETE = "discrete"
DISK_UNIFORM = "disk_uniform"


@dataclass(frozen=True)
class Measure:
    """A probability measure of one of the four supported variants.

    ``arc`` holds (a, b) with 0 <= a < 2*pi and a < b <= a + 2*pi; ``atoms``
    is nonempty only for the discrete variant and carries equal weights
    1/len(atoms); ``center``/``radius`` describe the disk variant.
    """

    kind: str
    arc: tuple | None = None
    atoms: tuple = ()
    center: gmpy2.mpc | None = None
    radius: gmpy2.mpfr | None = None


def arc_uniform(ctx: PrecisionContext, a, b) -> Measure:
    """Uniform probability measure on the circle arc {e^(i t): a <= t <= b}."""
    with ctx.active(32):
        lo = gmpy2.mpfr(a)
        hi = gmpy2.mpfr(b)
        two_pi = 2 * gmpy2.const_pi()
        if not (gmpy2.is_finite(lo) and gmpy2.is_finite(hi)) or hi <= lo:
            raise ConfigurationError(f"invalid arc endpoints ({a!r}, {b!r})")
        if hi - lo > two_pi:
            raise ConfigurationError("arc length exceeds the full circle")
        shift = gmpy2.floor(lo / two_pi) * two_pi
        return Measure(kind=ARC_UNIFORM, arc=(lo - shift, hi - shift))


def circle_uniform(ctx: PrecisionContext) -> Measure:
    """Uniform probability measure on the whole unit circle."""
    with ctx.active(32):
        return Measure(kind=CIRCLE_UNIFORM, arc=(gmpy2.mpfr(0), 2 * gmpy2.const_pi()))


def discrete_uniform(ctx: PrecisionContext, points) -> Measure:
    """Equal-weight atoms at the given (distinct) complex points."""
    with ctx.active(32):
        atoms = tuple(gmpy2.mpc(p) for p in points)
        if not atoms:
            raise ConfigurationError("a discrete measure needs at least one atom")
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                if atoms[i] == atoms[j]:
                    raise DegeneracyError(f"duplicate atom at index {j}")
        return Measure(kind=DISCRETE, atoms=atoms)


def disk_uniform(ctx: PrecisionContext, center, radius) -> Measure:
    """Uniform area measure on the closed disk B(center, radius)."""
    with ctx.active(32):
        c = gmpy2.mpc(center)
        r = gmpy2.mpfr(radius)
        if not gmpy2.is_finite(r) or r <= 0:
            raise ConfigurationError(f"disk radius must be positive, got {radius!r}")
        return Measure(kind=DISK_UNIFORM, center=c, radius=r)


def nodes_discrete(ctx: PrecisionContext, nodes: NodeSet) -> Measure:
    """The empirical measure of a circle node set (equal weights)."""
    return discrete_uniform(ctx, nodes.points)


# ---------------------------------------------------------------------------
# potentials


def potential(ctx: PrecisionContext, mu: Measure, z) -> gmpy2.mpfr:
    """Logarithmic potential U(z) = integral of log(1/|z - t|) d mu(t).

    Discrete measures are summed exactly (an atom collision raises
    :class:`PoleError`).  The circle and disk variants use the classical
    closed forms.  Arc potentials are evaluated through Clausen's function
    for z on the unit circle and by adaptive quadrature elsewhere.
    """
    with ctx.active(32):
        zc = gmpy2.mpc(z)
        if mu.kind == CIRCLE_UNIFORM:
            t = abs(zc)
            return -gmpy2.log(t) if t > 1 else gmpy2.mpfr(0)
        if mu.kind == DISCRETE:
            tiny = gmpy2.exp2(-2 * ctx.bits)
            acc = gmpy2.mpfr(0)
            for w in mu.atoms:
                d2 = gmpy2.norm(zc - w)
                if d2 < tiny:
                    raise PoleError("potential evaluated at an atom")
                acc += gmpy2.log(d2)
            return -acc / (2 * len(mu.atoms))
        if mu.kind == DISK_UNIFORM:
            d = abs(zc - mu.center)
            rr = mu.radius
            if d >= rr:
                return -gmpy2.log(d)
            return -gmpy2.log(rr) + (rr * rr - d * d) / (2 * rr * rr)
        a, b = mu.arc
        if abs(abs(zc) - 1) <= gmpy2.exp2(-(ctx.bits // 2)):
            theta = gmpy2.phase(zc)
            return (clausen(ctx, theta - a) - clausen(ctx, theta - b)) / (b - a)

        def f(t):
            return -gmpy2.log(gmpy2.norm(zc - unit_point(ctx, t))) / 2

        return integrate(ctx, f, a, b) / (b - a)


def support_distance(ctx: PrecisionContext, mu: Measure, z) -> gmpy2.mpfr:
    """Euclidean distance from z to the support of mu."""
    with ctx.active(32):
        zc = gmpy2.mpc(z)
        if mu.kind == DISCRETE:
            return min(abs(zc - w) for w in mu.atoms)
        if mu.kind == CIRCLE_UNIFORM:
            return abs(abs(zc) - 1)
        if mu.kind == DISK_UNIFORM:
            gap = abs(zc - mu.center) - mu.radius
            return gap if gap > 0 else gmpy2.mpfr(0)
        a, b = mu.arc
        two_pi = 2 * gmpy2.const_pi()
        phi = gmpy2.fmod(gmpy2.phase(zc), two_pi)
        if phi < 0:
            phi += two_pi
        if a <= phi <= b or a <= phi + two_pi <= b:
            return abs(abs(zc) - 1)
        return min(abs(zc - unit_point(ctx, a)), abs(zc - unit_point(ctx, b)))


def support_radius(ctx: PrecisionContext, mu: Measure) -> gmpy2.mpfr:
    """sup of |z| over the support of mu (for the disk-of-radius-R check)."""
    with ctx.active(32):
        if mu.kind == DISCRETE:
            return max(abs(w) for w in mu.atoms)
        if mu.kind == DISK_UNIFORM:
            return abs(mu.center) + mu.radius
        return gmpy2.mpfr(1)


# ---------------------------------------------------------------------------
# ball masses

def _arc_overlap(lo, hi, a, b, two_pi):
    # total length of ([lo, hi] + 2 pi Z) intersected with [a, b]; both
    # intervals have width <= 2 pi, so four shifted copies suffice.
    total = gmpy2.mpfr(0)
    for k in (-1, 0, 1, 2):
        s = lo + k * two_pi
        e = hi + k * two_pi
        s = s if s > a else a
        e = e if e < b else b
        if e > s:
            total += e - s
    return total


def _arc_ball_mass(a, b, center, r, two_pi):
    # mass of the closed ball B(center, r) under the uniform measure on the
    # arc (a, b) of the unit circle.
    if r <= 0:
        return gmpy2.mpfr(0)
    rho = abs(center)
    if gmpy2.is_zero(rho):
        return gmpy2.mpfr(1) if r >= 1 else gmpy2.mpfr(0)
    cosd = (1 + rho * rho - r * r) / (2 * rho)
    if cosd <= -1:
        return gmpy2.mpfr(1)
    if cosd >= 1:
        return gmpy2.mpfr(0)
    half = gmpy2.acos(cosd)
    phi = gmpy2.fmod(gmpy2.phase(center), two_pi)
    if phi < 0:
        phi += two_pi
    return _arc_overlap(phi - half, phi + half, a, b, two_pi) / (b - a)


def _disk_ball_mass(center_mu, radius_mu, z, r):
    # area of intersection of B(center_mu, radius_mu) and B(z, r), as a
    # fraction of the first disk (the standard two-segment lens formula).
    if r <= 0:
        return gmpy2.mpfr(0)
    d = abs(z - center_mu)
    r1 = radius_mu
    if d >= r1 + r:
        return gmpy2.mpfr(0)
    if d <= abs(r - r1):
        if r >= r1:
            return gmpy2.mpfr(1)
        return (r * r) / (r1 * r1)
    def _clamp(x):
        one = gmpy2.mpfr(1)
        return -one if x < -1 else (one if x > 1 else x)
    a1 = r1 * r1 * gmpy2.acos(_clamp((d * d + r1 * r1 - r * r) / (2 * d * r1)))
    a2 = r * r * gmpy2.acos(_clamp((d * d + r * r - r1 * r1) / (2 * d * r)))
    s = (-d + r1 + r) * (d + r1 - r) * (d - r1 + r) * (d + r1 + r)
    lens = a1 + a2 - gmpy2.sqrt(s if s > 0 else gmpy2.mpfr(0)) / 2
    return lens / (gmpy2.const_pi() * r1 * r1)


def ball_mass(ctx: PrecisionContext, mu: Measure, center, r) -> gmpy2.mpfr:
    """mu(B(center, r)) for the closed ball of radius r."""
    with ctx.active(32):
        c = gmpy2.mpc(center)
        rr = gmpy2.mpfr(r)
        if mu.kind == DISCRETE:
            if rr < 0:
                return gmpy2.mpfr(0)
            r2 = rr * rr
            hits = sum(1 for w in mu.atoms if gmpy2.norm(c - w) <= r2)
            return gmpy2.mpfr(hits) / len(mu.atoms)
        if mu.kind == DISK_UNIFORM:
            return _disk_ball_mass(mu.center, mu.radius, c, rr)
        a, b = mu.arc
        return _arc_ball_mass(a, b, c, rr, 2 * gmpy2.const_pi())


# ---------------------------------------------------------------------------
# KS distance


@dataclass(frozen=True)
class KSReport:
    """A certified lower bound for the KS distance with its witness ball."""

    value: gmpy2.mpfr
    witness_center: gmpy2.mpc
    witness_radius: gmpy2.mpfr
    refinement_level: int


def _anchors(ctx, mu):
    # points whose distances to a candidate center serve as radius candidates
    if mu.kind == DISCRETE:
        return list(mu.atoms)
    if mu.kind == DISK_UNIFORM:
        r = mu.radius
        return [mu.center, mu.center + r, mu.center - r,
                mu.center + gmpy2.mpc(0, 1) * r, mu.center - gmpy2.mpc(0, 1) * r]
    a, b = mu.arc
    return [unit_point(ctx, a), unit_point(ctx, b), unit_point(ctx, (a + b) / 2)]


def _angular_midpoints(ctx, atoms, two_pi):
    # midpoints between angle-consecutive atoms; unit-circle atoms get the
    # circular midpoint, everything else the chord midpoint
    if len(atoms) < 2:
        return []
    tol = gmpy2.exp2(-(ctx.bits // 4))
    order = sorted(range(len(atoms)), key=lambda i: gmpy2.phase(atoms[i]))
    out = []
    for idx in range(len(order)):
        z1 = atoms[order[idx]]
        z2 = atoms[order[(idx + 1) % len(order)]]
        if abs(abs(z1) - 1) <= tol and abs(abs(z2) - 1) <= tol:
            p1 = gmpy2.phase(z1)
            p2 = gmpy2.phase(z2)
            if idx + 1 == len(order):
                p2 += two_pi
            elif p2 < p1:
                p2 += two_pi
            out.append(unit_point(ctx, (p1 + p2) / 2))
        else:
            out.append((z1 + z2) / 2)
    return out


def _step_profile(atoms, center):
    # sorted squared distances from the center to each atom
    d2 = sorted(gmpy2.norm(center - w) for w in atoms)
    return d2


def ks_distance(ctx: PrecisionContext, mu: Measure, nu: Measure,
                refine: int = 6, extra_centers=()) -> KSReport:
    """sup over balls of |mu(B) - nu(B)|, by candidate enumeration.

    ``refine`` controls the density of the fallback grids; the returned value
    is a lower bound of the true sup that is nondecreasing in ``refine``.
    Every candidate is an actual closed ball.  When a discrete measure is
    involved, the discrepancy as a function of the radius is monotone between
    consecutive atom-entry radii, so evaluating at each entry radius and at
    radii geometrically just below it (offsets gap * 2^-level, level up to
    ``refine``) exhausts the per-center sup up to a gap * 2^-refine sliver.
    ``extra_centers`` widens the candidate set, which keeps reported values
    comparable across several measure pairs (e.g. for triangle-inequality
    comparisons).
    """
    if not isinstance(refine, int) or refine < 1:
        raise ConfigurationError(f"refine must be a positive integer, got {refine!r}")
    with ctx.active(32):
        two_pi = 2 * gmpy2.const_pi()

        centers = _anchors(ctx, mu) + _anchors(ctx, nu)
        for m in (mu, nu):
            if m.kind == DISCRETE:
                centers += _angular_midpoints(ctx, list(m.atoms), two_pi)
        centers += [gmpy2.mpc(c) for c in extra_centers]
        grid = min(8 << refine, 1024)
        centers += [unit_point(ctx, two_pi * g / grid) for g in range(grid)]
        if DISK_UNIFORM in (mu.kind, nu.kind):
            # centers equidistant from a whole circle of mass are degenerate
            # for circle-supported pairs, but useful against a disk
            centers.append(gmpy2.mpc(0))

        anchor_pts = _anchors(ctx, mu) + _anchors(ctx, nu)

        best = gmpy2.mpfr(0)
        best_center = centers[0]
        best_radius = gmpy2.mpfr(0)

        def _mass(measure, center, r, d2_cache):
            if measure.kind == DISCRETE:
                m = len(measure.atoms)
                return gmpy2.mpfr(bisect.bisect_right(d2_cache, r * r)) / m
            return ball_mass(ctx, measure, center, r)

        half = gmpy2.mpfr(1) / 2
        discrete_pair = mu.kind == DISCRETE or nu.kind == DISCRETE
        for center in centers:
            cache_mu = _step_profile(mu.atoms, center) if mu.kind == DISCRETE else None
            cache_nu = _step_profile(nu.atoms, center) if nu.kind == DISCRETE else None

            radii = []
            if discrete_pair:
                jumps2 = sorted(set((cache_mu or []) + (cache_nu or [])))
                prev = gmpy2.mpfr(0)
                for d2 in jumps2:
                    r = gmpy2.sqrt(d2)
                    radii.append(r)
                    gap = r - prev
                    if gap > 0 and not (mu.kind == DISCRETE and nu.kind == DISCRETE):
                        off = gap * half
                        for _ in range(refine):
                            radii.append(r - off)
                            off *= half
                    prev = r
            else:
                dmax = max(abs(center - p) for p in anchor_pts) + gmpy2.mpfr(1) / 4
                steps = min(8 << refine, 1024)
                radii = [dmax * j / steps for j in range(1, steps + 1)]

            for r in radii:
                diff = abs(_mass(mu, center, r, cache_mu)
                           - _mass(nu, center, r, cache_nu))
                if diff > best:
                    best = diff
                    best_center = center
                    best_radius = r
        return KSReport(value=best, witness_center=best_center,
                        witness_radius=best_radius, refinement_level=refine)


# ---------------------------------------------------------------------------
# regularity of a measure against a node set


@dataclass(frozen=True)
class RegularityParams:
    """Constants of the regularity assumptions (doubling, density, Hoelder).

    ``rho1`` bounds mass(B(zeta, r))/r^beta_dim from above for small r,
    ``rho2`` bounds it from below at the potential maximizer, ``C_holder``
    and ``alpha_holder`` control the modulus of continuity of the potential,
    and ``R`` is the support radius.
    """

    rho1: gmpy2.mpfr
    rho2: gmpy2.mpfr
    C_holder: gmpy2.mpfr
    alpha_holder: gmpy2.mpfr
    beta_dim: gmpy2.mpfr
    R: gmpy2.mpfr

    def __post_init__(self):
        vals = (self.rho1, self.rho2, self.C_holder, self.alpha_holder,
                self.beta_dim, self.R)
        if any(not gmpy2.is_finite(gmpy2.mpfr(v)) or gmpy2.mpfr(v) <= 0 for v in vals):
            raise ConfigurationError("regularity constants must be positive and finite")
        if not 0 < self.alpha_holder <= 1:
            raise ConfigurationError("alpha_holder must lie in (0, 1]")
        if not 0 < self.beta_dim <= 2:
            raise ConfigurationError("beta_dim must lie in (0, 2]")


@dataclass(frozen=True)
class ConditionCheck:
    passed: bool
    worst_value: gmpy2.mpfr
    witness_center: gmpy2.mpc | None = None
    witness_radius: gmpy2.mpfr | None = None


@dataclass(frozen=True)
class RegularityReport:
    support_radius: ConditionCheck
    upper_doubling: ConditionCheck
    lower_density: ConditionCheck
    holder: ConditionCheck
    z_plus: gmpy2.mpc

    def all_passed(self) -> bool:
        return (self.support_radius.passed and self.upper_doubling.passed
                and self.lower_density.passed and self.holder.passed)


def _support_parameter_grid(ctx, mu, count):
    # sample points of the support, as (point, is_onedimensional_parameter)
    if mu.kind == DISCRETE:
        return list(mu.atoms)
    if mu.kind == DISK_UNIFORM:
        pts = []
        rings = max(2, int(gmpy2.isqrt(count)))
        for i in range(1, rings + 1):
            rad = mu.radius * i / rings
            spokes = max(4, count // rings)
            for j in range(spokes):
                ang = 2 * gmpy2.const_pi() * j / spokes
                pts.append(mu.center + rad * unit_point(ctx, ang))
        return pts
    a, b = mu.arc
    return [unit_point(ctx, a + (b - a) * j / (count - 1)) for j in range(count)]


def potential_maximizer(ctx: PrecisionContext, mu: Measure,
                        grid_count: int | None = None) -> gmpy2.mpc:
    """argmax of U over supp(mu): coarse grid, then golden-section refinement.

    Ties go to the candidate of smallest angle.  Atoms of a discrete measure
    are poles of U, so for that variant the first atom is returned (U is
    unbounded there and any atom is a maximizer).
    """
    with ctx.active(32):
        if mu.kind == DISCRETE:
            return min(mu.atoms, key=lambda w: (gmpy2.phase(w), abs(w)))
        if grid_count is None:
            grid_count = 4 * 64
        a, b = mu.arc if mu.kind != DISK_UNIFORM else (gmpy2.mpfr(0), 2 * gmpy2.const_pi())

        if mu.kind == DISK_UNIFORM:
            # U is constant-maximal at the center for the uniform disk
            return mu.center

        def u_of(theta):
            return (clausen(ctx, theta - a) - clausen(ctx, theta - b)) / (b - a)

        thetas = [a + (b - a) * j / grid_count for j in range(grid_count + 1)]
        best_j = max(range(len(thetas)), key=lambda j: (u_of(thetas[j]), -j))
        lo = thetas[max(best_j - 1, 0)]
        hi = thetas[min(best_j + 1, len(thetas) - 1)]
        invphi = (gmpy2.sqrt(gmpy2.mpfr(5)) - 1) / 2
        x1 = hi - invphi * (hi - lo)
        x2 = lo + invphi * (hi - lo)
        f1, f2 = u_of(x1), u_of(x2)
        width_tol = gmpy2.exp2(-(ctx.bits // 4))
        while hi - lo > width_tol:
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + invphi * (hi - lo)
                f2 = u_of(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - invphi * (hi - lo)
                f1 = u_of(x1)
        return unit_point(ctx, (lo + hi) / 2)


def regularity_check(ctx: PrecisionContext, mu: Measure, S: NodeSet,
                     params: RegularityParams, *, zeta_samples: int = 160,
                     r_steps: int = 40, holder_samples: int = 64) -> RegularityReport:
    """Check the four regularity conditions on sampled (center, radius) grids.

    Report-only: each condition yields a pass flag plus the worst witness
    found.  A failed condition is not an exception.  The precondition that
    the nodes lie in supp(mu) is enforced.
    """
    with ctx.active(32):
        tol = gmpy2.exp2(-(ctx.bits // 4))
        for p in S.points:
            if support_distance(ctx, mu, p) > tol:
                raise PreconditionError("node set is not contained in supp(mu)")

        eps_sep = S.eps_min

        # condition 1: support inside the disk of radius R
        rad = support_radius(ctx, mu)
        cond1 = ConditionCheck(passed=bool(rad <= params.R), worst_value=rad)

        # condition 2: mass(B(zeta, r)) <= rho1 * r^beta for r < eps
        zetas = _support_parameter_grid(ctx, mu, zeta_samples) + list(S.points)
        worst2 = gmpy2.mpfr(0)
        wit2_c, wit2_r = None, None
        beta = gmpy2.mpfr(params.beta_dim)
        for zeta in zetas:
            for j in range(1, r_steps + 1):
                r = eps_sep * gmpy2.exp2(-gmpy2.mpfr(j) / 2)
                ratio = ball_mass(ctx, mu, zeta, r) / r ** beta
                if ratio > worst2:
                    worst2, wit2_c, wit2_r = ratio, zeta, r
        cond2 = ConditionCheck(passed=bool(worst2 <= params.rho1),
                               worst_value=worst2, witness_center=wit2_c,
                               witness_radius=wit2_r)

        # condition 3: density >= rho2 at the potential maximizer
        z_plus = potential_maximizer(ctx, mu)
        r_star = min(abs(z_plus - p) for p in S.points)
        if r_star <= gmpy2.exp2(-(ctx.bits // 2)):
            cond3 = ConditionCheck(passed=True, worst_value=gmpy2.inf(),
                                   witness_center=z_plus, witness_radius=r_star)
        else:
            ratio3 = ball_mass(ctx, mu, z_plus, r_star) / r_star ** beta
            cond3 = ConditionCheck(passed=bool(ratio3 >= params.rho2),
                                   worst_value=ratio3, witness_center=z_plus,
                                   witness_radius=r_star)

        # condition 4: Hoelder continuity of U on sampled support pairs,
        # with geometric clustering toward arc endpoints where the modulus
        # of continuity degenerates
        pts = _support_parameter_grid(ctx, mu, holder_samples)
        if mu.kind in (ARC_UNIFORM, CIRCLE_UNIFORM):
            a, b = mu.arc
            for k in range(2, 62, 4):
                off = (b - a) * gmpy2.exp2(-k)
                pts += [unit_point(ctx, a + off), unit_point(ctx, b - off)]
        us = []
        for p in pts:
            try:
                us.append((p, potential(ctx, mu, p)))
            except PoleError:
                continue
        worst4 = gmpy2.mpfr(0)
        wit4 = None
        alpha_h = gmpy2.mpfr(params.alpha_holder)
        sep_floor = gmpy2.exp2(-(ctx.bits // 4))
        for i in range(len(us)):
            for j in range(i + 1, len(us)):
                d = abs(us[i][0] - us[j][0])
                if d <= sep_floor:
                    continue
                ratio = abs(us[i][1] - us[j][1]) / d ** alpha_h
                if ratio > worst4:
                    worst4 = ratio
                    wit4 = us[i][0]
        if not us and mu.kind == DISCRETE:
            worst4 = gmpy2.inf()
        cond4 = ConditionCheck(passed=bool(worst4 <= params.C_holder),
                               worst_value=worst4, witness_center=wit4)

        return RegularityReport(support_radius=cond1, upper_doubling=cond2,
                                lower_density=cond3, holder=cond4, z_plus=z_plus)


# ---------------------------------------------------------------------------
# potential comparison and the rate


def potential_diff_bound(ctx: PrecisionContext, mu_c: Measure, mu_d: Measure,
                         z, params: RegularityParams, *, refine: int = 6,
                         ks_value=None) -> gmpy2.mpfr:
    """Upper bound log(e*D/eps) * KS(mu_d, mu_c) for |U_d(z) - U_c(z)|.

    eps is chosen as large as admissible: the smaller of dist(z, supp(mu_d))
    and (beta * KS / rho1)^(1/beta), which requires the upper doubling bound
    of ``params`` to hold for mu_c.  D is the diameter of a disk containing
    both supports (twice ``params.R``).  KS(mu_c, mu_d) = 0 with z off the
    support yields a bound of zero; when no positive eps is admissible a
    :class:`PreconditionError` is raised.
    """
    with ctx.active(32):
        ks = gmpy2.mpfr(ks_value) if ks_value is not None else \
            ks_distance(ctx, mu_d, mu_c, refine=refine).value
        dist = support_distance(ctx, mu_d, z)
        if gmpy2.is_zero(ks):
            if dist > 0:
                return gmpy2.mpfr(0)
            raise PreconditionError("z lies in supp(mu_d) and KS is zero")
        beta = gmpy2.mpfr(params.beta_dim)
        eps_cap = (beta * ks / params.rho1) ** (1 / beta)
        eps_adm = min(dist, eps_cap)
        if eps_adm <= 0:
            raise PreconditionError("no admissible eps: z touches supp(mu_d)")
        diameter = 2 * gmpy2.mpfr(params.R)
        return (1 + gmpy2.log(diameter) - gmpy2.log(eps_adm)) * ks


def _extremize_potential(ctx, mu, support, resolution, want_max):
    # grid + golden-section extremum of U^mu over the support of `support`
    sign = 1 if want_max else -1

    def val(z):
        try:
            return sign * potential(ctx, mu, z)
        except PoleError:
            return gmpy2.inf()

    if support.kind == DISCRETE:
        return max(val(w) for w in support.atoms) * sign
    if support.kind == DISK_UNIFORM:
        pts = _support_parameter_grid(ctx, support, max(resolution, 64))
        return max(val(p) for p in pts) * sign

    a, b = support.arc

    def g(theta):
        return val(unit_point(ctx, theta))

    m = max(resolution, 16)
    thetas = [a + (b - a) * j / m for j in range(m + 1)]
    vals = [g(t) for t in thetas]
    best_j = max(range(len(thetas)), key=lambda j: (vals[j], -j))
    lo = thetas[max(best_j - 1, 0)]
    hi = thetas[min(best_j + 1, len(thetas) - 1)]
    invphi = (gmpy2.sqrt(gmpy2.mpfr(5)) - 1) / 2
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = g(x1), g(x2)
    width_tol = gmpy2.exp2(-(ctx.bits // 4))
    while hi - lo > width_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = g(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = g(x1)
    return max(vals[best_j], f1, f2) * sign


def rate_delta(ctx: PrecisionContext, mu: Measure, nu: Measure,
               search_resolution: int = 256) -> gmpy2.mpfr:
    """sup of U^mu over supp(mu) minus inf of U^mu over supp(nu).

    Both extrema are located by a grid at ``search_resolution`` points plus
    golden-section refinement along one-dimensional supports.
    """
    with ctx.active(32):
        hi = _extremize_potential(ctx, mu, mu, search_resolution, want_max=True)
        lo = _extremize_potential(ctx, mu, nu, search_resolution, want_max=False)
        return hi - lo


def lagrange_sup_rate(ctx: PrecisionContext, nodes: NodeSet,
                      grid_size: int = 2048) -> gmpy2.mpfr:
    """max over k of (sup over the circle of log |L_k|) / n.

    Writes log |L_k(z)| as n * (U_k(z_k) - U_k(z)) where U_k is the potential
    of the nodes with z_k removed, and shares one grid evaluation of the full
    node potential across all k: U_k = ((n+1) U_S - log 1/|z - z_k|) / n.
    The infimum of U_k over the circle is taken on the offset grid, so no
    singular values are touched and no SVD is involved.
    """
    with ctx.active(32):
        pts = nodes.points
        n = nodes.n
        if n < 1:
            raise ConfigurationError("need at least two nodes")
        two_pi = 2 * gmpy2.const_pi()
        tiny = gmpy2.exp2(-2 * ctx.bits)

        grid = [unit_point(ctx, two_pi * (g + gmpy2.mpfr(1) / 2) / grid_size)
                for g in range(grid_size)]
        # (n+1) * U_S on the grid, as a plain sum of logs
        total_u = []
        for z in grid:
            acc = gmpy2.mpfr(0)
            ok = True
            for w in pts:
                d2 = gmpy2.norm(z - w)
                if d2 < tiny:
                    ok = False
                    break
                acc += gmpy2.log(d2) / 2
            total_u.append(-acc if ok else None)

        best = gmpy2.mpfr("-inf")
        for k in range(n + 1):
            zk = pts[k]
            # n * U_k(z_k) = -sum_{j != k} log |z_k - z_j|
            acc = gmpy2.mpfr(0)
            for j, w in enumerate(pts):
                if j != k:
                    acc += gmpy2.log(gmpy2.norm(zk - w)) / 2
            uk_at_node = -acc

            inf_uk = gmpy2.inf()
            for z, tu in zip(grid, total_u):
                if tu is None:
                    continue
                uk = tu + gmpy2.log(gmpy2.norm(z - zk)) / 2
                if uk < inf_uk:
                    inf_uk = uk
            rate = (uk_at_node - inf_uk) / n
            if rate > best:
                best = rate
        return best
