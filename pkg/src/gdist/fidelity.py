"""Quantum fidelity of two single-mode Gaussian states.

Closed form for covariance states:

    F = sqrt(2 / (sqrt(Dcap + dlow) - sqrt(dlow))) * exp(-beta^T (C1+C2)^{-1} beta)

with Dcap = det(C1 + C2), dlow = (det C1 - 1)(det C2 - 1) and beta the mean
difference.  The same-mean parameter form expresses Dcap through the squeeze
mismatch D(s1, s2, theta2 - theta1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MeanMismatchError, NonPhysicalStateError
from .states import (
    CovarianceState,
    GaussianParams,
    SymplecticMap,
    apply_symplectic,
    covariance_from_params,
    default_tol,
    is_physical,
    params_from_covariance,
    states_equal,
)


@dataclass(frozen=True)
class FidelityReport:
    """Fidelity together with the intermediate quantities and derived metrics."""

    fidelity: float
    delta_cap: float
    delta_low: float
    exponent: float
    bures_distance_sq: float
    uhlmann_angle: float


def squeeze_mismatch(s1: float, s2: float, theta_tilde: float) -> float:
    """Mismatch D of two squeezing ellipses at relative angle theta_tilde.

    D = (s1 + 1/s1)(s2 + 1/s2) - (s1 - 1/s1)(s2 - 1/s2) cos(2 theta_tilde);
    D >= 4, with equality iff the ellipses coincide in shape and direction.
    """
    s1p, s1m = s1 + 1.0 / s1, s1 - 1.0 / s1
    s2p, s2m = s2 + 1.0 / s2, s2 - 1.0 / s2
    return s1p * s2p - s1m * s2m * math.cos(2.0 * theta_tilde)


def _positive_excess(det: float) -> float:
    # det - 1 clamped at 0: physicality allows det >= 1 - tol, and pure-state
    # roundoff must not push the product under the square root negative.
    return max(det - 1.0, 0.0)


def _report(delta_cap: float, delta_low: float, exponent: float, force_one: bool) -> FidelityReport:
    if delta_low < 0.0:  # defensive; factors are clamped upstream
        delta_low = 0.0
    exponent += 0.0  # normalize -0.0
    fid = math.sqrt(2.0 / (math.sqrt(delta_cap + delta_low) - math.sqrt(delta_low)))
    fid *= math.exp(exponent)
    if force_one:
        fid = 1.0
    fid = min(fid, 1.0)
    return FidelityReport(
        fidelity=fid,
        delta_cap=delta_cap,
        delta_low=delta_low,
        exponent=exponent,
        bures_distance_sq=2.0 * (1.0 - fid),
        uhlmann_angle=math.acos(fid),
    )


def fidelity_gaussian(
    a: CovarianceState, b: CovarianceState, tol: float | None = None
) -> FidelityReport:
    """Fidelity of two Gaussian states given in covariance form.

    Symmetric in its arguments; returns exactly 1 iff the states coincide
    within 1e-9 in canonical parameters.
    """
    tol = default_tol() if tol is None else tol
    if not is_physical(a, tol):
        raise NonPhysicalStateError("first state is not physical")
    if not is_physical(b, tol):
        raise NonPhysicalStateError("second state is not physical")
    total = a.cov + b.cov
    delta_cap = float(total[0, 0] * total[1, 1] - total[0, 1] * total[1, 0])
    delta_low = _positive_excess(a.det) * _positive_excess(b.det)
    beta = b.mean - a.mean
    # (C1 + C2)^{-1} via the 2x2 adjugate; exact up to one division
    quad = (
        total[1, 1] * beta[0] * beta[0]
        - 2.0 * total[0, 1] * beta[0] * beta[1]
        + total[0, 0] * beta[1] * beta[1]
    ) / delta_cap
    identical = states_equal(params_from_covariance(a, tol), params_from_covariance(b, tol))
    return _report(delta_cap, delta_low, -quad, identical)


def fidelity_same_mean(
    p1: GaussianParams, p2: GaussianParams, tol: float | None = None
) -> FidelityReport:
    """Fidelity from the five-parameter form, valid for equal means.

    Dcap = gamma1^2 + gamma2^2 + (gamma1 gamma2 / 2) D(s1, s2, theta2-theta1),
    dlow = (gamma1^2 - 1)(gamma2^2 - 1).  Agrees with ``fidelity_gaussian``
    to 1e-12.
    """
    tol = default_tol() if tol is None else tol
    if abs(p1.alpha_x - p2.alpha_x) > tol or abs(p1.alpha_y - p2.alpha_y) > tol:
        raise MeanMismatchError("states do not share a mean; use fidelity_gaussian")
    mism = squeeze_mismatch(p1.s, p2.s, p2.theta - p1.theta)
    delta_cap = p1.gamma**2 + p2.gamma**2 + 0.5 * p1.gamma * p2.gamma * mism
    delta_low = _positive_excess(p1.gamma**2) * _positive_excess(p2.gamma**2)
    return _report(delta_cap, delta_low, 0.0, states_equal(p1, p2))


@dataclass(frozen=True)
class PropertyViolation:
    name: str
    magnitude: float
    detail: str


def check_fidelity_properties(
    triples,
    symmetry_tol: float = 1e-14,
    invariance_tol: float = 1e-12,
    triangle_tol: float = 1e-10,
    map_=None,
    displacement=(0.3, -0.2),
) -> list[PropertyViolation]:
    """Check fidelity properties on a sample of covariance-state triples.

    Per triple: symmetry F(a,b) = F(b,a), range [0,1], invariance under a
    shared symplectic map plus displacement, and the triangle inequality for
    the angle arccos(F).  Returns the violations found (empty on pass).
    """
    if map_ is None:
        rot = SymplecticMap.rotation(math.pi / 5).matrix
        sq = SymplecticMap.squeezing(1.7, 0.4).matrix
        map_ = SymplecticMap(rot @ sq)
    violations: list[PropertyViolation] = []
    for idx, (sa, sb, sc) in enumerate(triples):
        fab = fidelity_gaussian(sa, sb).fidelity
        fba = fidelity_gaussian(sb, sa).fidelity
        if abs(fab - fba) > symmetry_tol:
            violations.append(
                PropertyViolation("symmetry", abs(fab - fba), f"triple {idx}")
            )
        fbc = fidelity_gaussian(sb, sc).fidelity
        fac = fidelity_gaussian(sa, sc).fidelity
        for val in (fab, fbc, fac):
            if not (0.0 <= val <= 1.0):
                violations.append(PropertyViolation("range", val, f"triple {idx}"))
        ta = apply_symplectic(sa, map_, displacement)
        tb = apply_symplectic(sb, map_, displacement)
        moved = fidelity_gaussian(ta, tb).fidelity
        if abs(moved - fab) > invariance_tol:
            violations.append(
                PropertyViolation("invariance", abs(moved - fab), f"triple {idx}")
            )
        angle = math.acos
        if angle(fac) > angle(fab) + angle(fbc) + triangle_tol:
            violations.append(
                PropertyViolation(
                    "triangle",
                    angle(fac) - angle(fab) - angle(fbc),
                    f"triple {idx}",
                )
            )
    return violations


def fidelity_params(p1: GaussianParams, p2: GaussianParams) -> FidelityReport:
    """Fidelity for arbitrary parameterized states (any means)."""
    return fidelity_gaussian(covariance_from_params(p1), covariance_from_params(p2))
