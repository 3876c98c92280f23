"""Minimal homodyne overlap versus fidelity: solvers and pair classification.

For equal means the overlap is I_phi = f(B2/B1), f concave with f(x)=f(1/x),
so its minimum sits at whichever extreme of the width ratio lies farthest
from 1 on a log scale.  The extremes are the generalized eigenvalues of the
two covariance matrices,

    mu_pm = (gamma2/gamma1) * (D +- sqrt(D^2 - 16)) / 4,

with D the squeeze mismatch; they depend on the pair only through
(gamma1, gamma2, D).  The equality I_phi = F reduces to a harmonic equation
a1 sin 2phi + a2 cos 2phi + a3 = 0 whose solvability reproduces the
classification: pure/pure pairs always reach equality, pure/mixed never, and
mixed/mixed only on the surface D = 2 * thermal_ratio_sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateFidelityError,
    MeanMismatchError,
    UnsupportedPairError,
)
from .fidelity import fidelity_params, fidelity_same_mean, squeeze_mismatch
from .homodyne import minimize_overlap_scan, overlap_from_ratio
from .states import GaussianParams, covariance_from_params, default_tol, means_equal, states_equal

PURITY_TOL = 1e-9
CONDITION_TOL = 1e-9


class PairClass(Enum):
    PURE_PURE_ALWAYS_OPTIMAL = "PurePureAlwaysOptimal"
    PURE_MIXED_NEVER_OPTIMAL = "PureMixedNeverOptimal"
    MIXED_MIXED_OPTIMAL = "MixedMixedOptimal"
    MIXED_MIXED_NOT_OPTIMAL = "MixedMixedNotOptimal"
    DIFFERENT_MEAN_SYMMETRIC_OPTIMAL = "DifferentMeanSymmetricOptimal"
    DIFFERENT_MEAN_SYMMETRIC_NOT_OPTIMAL = "DifferentMeanSymmetricNotOptimal"
    IDENTICAL_STATES = "IdenticalStates"

    @property
    def is_optimal(self) -> bool:
        return self in (
            PairClass.PURE_PURE_ALWAYS_OPTIMAL,
            PairClass.MIXED_MIXED_OPTIMAL,
            PairClass.DIFFERENT_MEAN_SYMMETRIC_OPTIMAL,
            PairClass.IDENTICAL_STATES,
        )


@dataclass(frozen=True)
class OptimalityVerdict:
    """Classification of a state pair with numeric witnesses.

    ``gap`` is min_phi I_phi - F; ``witness_phi`` is an angle achieving
    I_phi = F when the class is an optimal variant; ``condition_residual``
    is D - 2*thermal_ratio_sum for mixed/mixed pairs, None otherwise.
    """

    kind: PairClass
    gap: float
    witness_phi: float | None = None
    condition_residual: float | None = None


@dataclass(frozen=True)
class HarmonicBranch:
    """One branch of the equality condition, as a harmonic equation in 2phi."""

    target_ratio: float
    upsilon: float
    a1: float
    a2: float
    a3: float

    @property
    def discriminant(self) -> float:
        return self.a1**2 + self.a2**2 - self.a3**2


@dataclass(frozen=True)
class OptimalityEquation:
    """Both branches of the equality condition I_phi = F.

    The two target width ratios are reciprocal; the reported ``a1, a2, a3``
    and ``discriminant`` belong to the more solvable branch (larger
    discriminant), and the equation is solvable iff that discriminant is
    nonnegative.
    """

    branch_plus: HarmonicBranch
    branch_minus: HarmonicBranch
    fidelity: float

    @property
    def _leading(self) -> HarmonicBranch:
        if self.branch_plus.discriminant >= self.branch_minus.discriminant:
            return self.branch_plus
        return self.branch_minus

    @property
    def a1(self) -> float:
        return self._leading.a1

    @property
    def a2(self) -> float:
        return self._leading.a2

    @property
    def a3(self) -> float:
        return self._leading.a3

    @property
    def discriminant(self) -> float:
        return self._leading.discriminant

    @property
    def upsilon_plus(self) -> float:
        return self.branch_plus.upsilon

    @property
    def upsilon_minus(self) -> float:
        return self.branch_minus.upsilon


@dataclass(frozen=True)
class S2Root:
    """Solution of the mixed/mixed equality surface, canonicalized to s2 >= 1.

    A sub-unity raw root is reported as (1/root, theta_tilde + pi/2); both
    describe the same second state.
    """

    s2: float
    theta_tilde: float


def thermal_ratio_sum(g1: float, g2: float) -> float:
    """Symmetric ratio sum of the thermal factors gamma - 1/gamma.

    t2/t1 + t1/t2 with ti = gamma_i - 1/gamma_i; >= 2, equal iff g1 = g2.
    Defined for mixed states only (gamma > 1).
    """
    t1 = g1 - 1.0 / g1
    t2 = g2 - 1.0 / g2
    if t1 <= 0.0 or t2 <= 0.0:
        raise ValueError("thermal_ratio_sum needs gamma > 1 on both sides")
    return t2 / t1 + t1 / t2


def ratio_extremes(p1: GaussianParams, p2: GaussianParams) -> tuple[float, float]:
    """Extremal values (mu_minus, mu_plus) of B2/B1 over the angle.

    Generalized eigenvalues of the covariance pair; roots of
    mu^2 - mu (gamma2/gamma1) D / 2 + (gamma2/gamma1)^2 = 0.
    """
    ratio = p2.gamma / p1.gamma
    mism = squeeze_mismatch(p1.s, p2.s, p2.theta - p1.theta)
    root = math.sqrt(max(mism * mism - 16.0, 0.0))
    mu_plus = ratio * (mism + root) / 4.0
    mu_minus = ratio * (mism - root) / 4.0
    return mu_minus, mu_plus


def _extreme_angle(p1: GaussianParams, p2: GaussianParams, mu: float) -> float:
    """Angle where B2/B1 attains the extreme ``mu`` (null direction of C2 - mu*C1)."""
    c1 = covariance_from_params(p1).cov
    c2 = covariance_from_params(p2).cov
    m = c2 - mu * c1
    # null vector of a singular symmetric 2x2; pick the better-conditioned row
    if abs(m[0, 0]) + abs(m[0, 1]) >= abs(m[1, 0]) + abs(m[1, 1]):
        u = (m[0, 1], -m[0, 0])
    else:
        u = (m[1, 1], -m[1, 0])
    if u == (0.0, 0.0):  # ratio constant in phi
        return 0.0
    return math.atan2(u[1], u[0]) % math.pi


def minimize_overlap(p1: GaussianParams, p2: GaussianParams) -> tuple[float, float]:
    """Minimize I_phi over the measurement angle for a same-mean pair.

    Analytic: evaluates f at both ratio extremes and keeps the smaller;
    pairs with different means are routed to ``minimize_overlap_general``.
    Returns (phi_min, overlap_min).
    """
    if not means_equal(p1, p2):
        return minimize_overlap_general(p1, p2)
    mu_minus, mu_plus = ratio_extremes(p1, p2)
    f_plus = float(overlap_from_ratio(mu_plus))
    f_minus = float(overlap_from_ratio(mu_minus))
    if f_plus <= f_minus:
        mu, val = mu_plus, f_plus
    else:
        mu, val = mu_minus, f_minus
    return _extreme_angle(p1, p2, mu), val


def minimize_overlap_general(
    p1: GaussianParams, p2: GaussianParams, grid_points: int = 4096
) -> tuple[float, float]:
    """Global minimum of I_phi for arbitrary means (dense grid + refinement)."""
    return minimize_overlap_scan(p1, p2, grid_points=grid_points)


def build_equality_equation(
    p1: GaussianParams, p2: GaussianParams, fid: float, tol: float | None = None
) -> OptimalityEquation:
    """Set up both harmonic branches of the equality I_phi = fid.

    Each branch demands B2/B1 equal a target ratio [F^-2 +- sqrt(F^-4 - 1)]^2;
    cross-multiplying the trigonometric width ratio gives the coefficients.
    Raises DegenerateFidelityError for fid = 1 (every angle solves).
    """
    tol = default_tol() if tol is None else tol
    if not means_equal(p1, p2, tol):
        raise MeanMismatchError("equality analysis assumes equal means")
    if not 0.0 < fid <= 1.0:
        raise ValueError(f"fidelity must lie in (0, 1], got {fid}")
    if fid >= 1.0 - 1e-12:
        raise DegenerateFidelityError("fidelity is 1; the pair is identical")
    inv2 = 1.0 / (fid * fid)
    spread = math.sqrt(max(inv2 * inv2 - 1.0, 0.0))
    s1p, s1m = p1.s + 1.0 / p1.s, p1.s - 1.0 / p1.s
    s2p, s2m = p2.s + 1.0 / p2.s, p2.s - 1.0 / p2.s

    def branch(target: float) -> HarmonicBranch:
        a1 = p2.gamma * s2m * math.sin(2.0 * p2.theta) - target * p1.gamma * s1m * math.sin(
            2.0 * p1.theta
        )
        a2 = p2.gamma * s2m * math.cos(2.0 * p2.theta) - target * p1.gamma * s1m * math.cos(
            2.0 * p1.theta
        )
        a3 = p2.gamma * s2p - target * p1.gamma * s1p
        return HarmonicBranch(target, (p1.gamma / p2.gamma) * target, a1, a2, a3)

    return OptimalityEquation(
        branch_plus=branch((inv2 + spread) ** 2),
        branch_minus=branch((inv2 - spread) ** 2),
        fidelity=fid,
    )


def _solve_harmonic(a1: float, a2: float, a3: float) -> list[float]:
    """Roots in [0, pi) of a1 sin 2phi + a2 cos 2phi + a3 = 0.

    Near-tangent equations (|discriminant| below 1e-12 of the amplitude)
    collapse to one double root; returns [] when unsolvable.
    """
    rr = a1 * a1 + a2 * a2
    if rr == 0.0:
        return [0.0] if abs(a3) < 1e-15 else []
    disc = rr - a3 * a3
    if disc < -1e-12 * rr:
        return []
    r = math.sqrt(rr)
    psi = math.atan2(a2, a1)
    target = min(1.0, max(-1.0, -a3 / r))
    if disc <= 1e-12 * rr:
        # tangency: sin(2phi + psi) = +-1, a single double root
        t = math.copysign(math.pi / 2.0, target)
        return [((t - psi) / 2.0) % math.pi]
    t = math.asin(target)
    roots = [((t - psi) / 2.0) % math.pi, ((math.pi - t - psi) / 2.0) % math.pi]
    return sorted(roots)


def solve_equality_phi(eq: OptimalityEquation) -> list[float]:
    """All angles in [0, pi) where I_phi equals the equation's fidelity."""
    roots: list[float] = []
    for branch in (eq.branch_plus, eq.branch_minus):
        roots.extend(_solve_harmonic(branch.a1, branch.a2, branch.a3))
    roots.sort()
    deduped: list[float] = []
    for phi in roots:
        if deduped and (phi - deduped[-1]) < 1e-9:
            continue
        if deduped and (math.pi - phi + deduped[0]) < 1e-9:
            continue  # wraps onto the first root mod pi
        deduped.append(phi)
    return deduped


def check_condition_s1_unity(
    g1: float, g2: float, s2: float, tol: float = CONDITION_TOL
) -> bool:
    """Optimality test for a round first state (s1 = 1).

    True iff both states are pure, or both are mixed with
    s2 + 1/s2 = thermal_ratio_sum(g1, g2) within the relative tolerance.
    """
    pure1 = g1 <= 1.0 + PURITY_TOL
    pure2 = g2 <= 1.0 + PURITY_TOL
    if pure1 and pure2:
        return True
    if pure1 != pure2:
        return False
    ratio_sum = thermal_ratio_sum(g1, g2)
    return abs(s2 + 1.0 / s2 - ratio_sum) < tol * ratio_sum


def check_condition_general(
    p1: GaussianParams, p2: GaussianParams, tol: float = CONDITION_TOL
) -> OptimalityVerdict:
    """Classify a same-mean pair by the purity/mismatch criteria.

    pure/pure -> always optimal; pure/mixed -> never; mixed/mixed -> optimal
    iff D = 2*thermal_ratio_sum within ``tol`` (relative).  The gap field is
    the analytic minimum of I_phi minus F.
    """
    if not means_equal(p1, p2):
        raise MeanMismatchError(
            "means differ; use check_different_mean_symmetric or min-overlap"
        )
    fid = fidelity_same_mean(p1, p2).fidelity
    phi_min, val_min = minimize_overlap(p1, p2)
    gap = val_min - fid
    if states_equal(p1, p2):
        return OptimalityVerdict(PairClass.IDENTICAL_STATES, 0.0, witness_phi=0.0)
    pure1 = p1.is_pure(PURITY_TOL)
    pure2 = p2.is_pure(PURITY_TOL)
    if pure1 and pure2:
        return OptimalityVerdict(
            PairClass.PURE_PURE_ALWAYS_OPTIMAL, gap, witness_phi=phi_min
        )
    if pure1 != pure2:
        return OptimalityVerdict(PairClass.PURE_MIXED_NEVER_OPTIMAL, gap)
    ratio_sum = thermal_ratio_sum(p1.gamma, p2.gamma)
    mism = squeeze_mismatch(p1.s, p2.s, p2.theta - p1.theta)
    residual = mism - 2.0 * ratio_sum
    if abs(residual) < tol * ratio_sum:
        return OptimalityVerdict(
            PairClass.MIXED_MIXED_OPTIMAL,
            gap,
            witness_phi=phi_min,
            condition_residual=residual,
        )
    return OptimalityVerdict(
        PairClass.MIXED_MIXED_NOT_OPTIMAL, gap, condition_residual=residual
    )


def solve_s2_for_optimality(
    g1: float, g2: float, s1: float, theta_tilde: float
) -> list[S2Root]:
    """Squeezing degrees s2 putting a mixed/mixed pair on the equality surface.

    D(s1, s2, theta_tilde) = 2*thermal_ratio_sum becomes, after multiplying
    by s2, the quadratic

        (s1p - s1m c) s2^2 - 2*ratio_sum s2 + (s1p + s1m c) = 0,  c = cos 2*theta_tilde.

    Real roots are returned in descending raw order, canonicalized to s2 >= 1;
    an empty list means the configuration can never reach equality.
    """
    if g1 <= 1.0 + PURITY_TOL or g2 <= 1.0 + PURITY_TOL:
        raise ValueError("equality surface applies to mixed states only (gamma > 1)")
    if s1 < 1.0:
        raise ValueError("s1 must be canonical (>= 1)")
    ratio_sum = thermal_ratio_sum(g1, g2)
    c = math.cos(2.0 * theta_tilde)
    s1p, s1m = s1 + 1.0 / s1, s1 - 1.0 / s1
    qa = s1p - s1m * c
    qb = -2.0 * ratio_sum
    qc = s1p + s1m * c
    disc = qb * qb - 4.0 * qa * qc
    if disc < -1e-12 * ratio_sum * ratio_sum:
        return []
    disc = max(disc, 0.0)
    root = math.sqrt(disc)
    raw = [(-qb + root) / (2.0 * qa)]
    if root > 1e-15 * ratio_sum:
        raw.append((-qb - root) / (2.0 * qa))
    out = []
    for value in raw:
        if value >= 1.0:
            out.append(S2Root(value, theta_tilde % math.pi))
        else:
            out.append(S2Root(1.0 / value, (theta_tilde + math.pi / 2.0) % math.pi))
    return out


def check_different_mean_symmetric(
    g1: float, g2: float, beta, tol: float | None = None
) -> OptimalityVerdict:
    """Classify a pair of round states (s = 1) whose means differ by ``beta``.

    Optimal iff the thermal widths coincide; the witness angle aligns with
    the mean difference.  Gap is cross-checked by the grid minimizer.
    """
    tol = default_tol() if tol is None else tol
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (2,):
        raise ValueError("beta must be a 2-vector")
    p1 = GaussianParams(g1)
    p2 = GaussianParams(g2, alpha_x=beta[0], alpha_y=beta[1])
    if means_equal(p1, p2, tol):
        return check_condition_general(p1, p2)
    fid = fidelity_params(p1, p2).fidelity
    _, val_min = minimize_overlap_general(p1, p2)
    gap = val_min - fid
    if abs(g1 - g2) < tol:
        witness = math.atan2(beta[1], beta[0]) % math.pi
        return OptimalityVerdict(
            PairClass.DIFFERENT_MEAN_SYMMETRIC_OPTIMAL, gap, witness_phi=witness
        )
    return OptimalityVerdict(PairClass.DIFFERENT_MEAN_SYMMETRIC_NOT_OPTIMAL, gap)


def classify_pair(p1: GaussianParams, p2: GaussianParams) -> OptimalityVerdict:
    """Route a pair to the applicable classifier.

    Equal means go to the purity/mismatch criteria; differing means are
    classified only for round states.  Other configurations raise
    UnsupportedPairError (their numeric gap is still available through
    ``minimize_overlap_general``).
    """
    if means_equal(p1, p2):
        return check_condition_general(p1, p2)
    if p1.s == 1.0 and p2.s == 1.0:
        beta = (p2.alpha_x - p1.alpha_x, p2.alpha_y - p1.alpha_y)
        return check_different_mean_symmetric(p1.gamma, p2.gamma, beta)
    raise UnsupportedPairError(
        "pairs with different means and squeezing are not classified; "
        "use min-overlap for the numeric gap"
    )
