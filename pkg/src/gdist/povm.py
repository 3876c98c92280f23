"""Projection-valued measurements onto squeezed coherent states.

The family consists of the POVMs with elements (1/pi) U^dag |alpha><alpha| U
for U a squeeze of degree r along direction theta_u.  Its outcome
distribution is the Husimi Q function of the transformed state: a 2-D
Gaussian over the alpha plane.  r = 0 is heterodyne detection; r -> infinity
recovers homodyne detection along theta_u.  Whether the large-r limit is the
best member of the family is an open question; ``conjecture_scan`` only
collects numerical evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fidelity import fidelity_params
from .homodyne import overlap_at
from .optimality import minimize_overlap
from .states import GaussianParams, SymplecticMap, covariance_from_params


class PovmKind(Enum):
    HETERODYNE = "Heterodyne"
    SQUEEZED = "Squeezed"
    HOMODYNE_LIMIT = "HomodyneLimit"


@dataclass(frozen=True)
class PovmFamilySpec:
    """One member of the measurement family: squeeze degree and direction.

    ``homodyne_limit`` marks the r -> infinity member, which is evaluated by
    delegating to the homodyne overlap at angle ``theta_u``.
    """

    r: float = 0.0
    theta_u: float = 0.0
    homodyne_limit: bool = False

    def __post_init__(self):
        if self.homodyne_limit:
            return
        if not math.isfinite(self.r) or self.r < 0.0:
            raise ValueError(f"squeeze parameter must be finite and >= 0, got {self.r}")

    @property
    def kind(self) -> PovmKind:
        if self.homodyne_limit:
            return PovmKind.HOMODYNE_LIMIT
        return PovmKind.HETERODYNE if self.r == 0.0 else PovmKind.SQUEEZED

    @staticmethod
    def heterodyne() -> "PovmFamilySpec":
        return PovmFamilySpec(0.0, 0.0)

    @staticmethod
    def squeezed(r: float, theta_u: float = 0.0) -> "PovmFamilySpec":
        return PovmFamilySpec(r, theta_u)

    @staticmethod
    def homodyne(theta_u: float = 0.0) -> "PovmFamilySpec":
        return PovmFamilySpec(0.0, theta_u, homodyne_limit=True)


@dataclass(frozen=True, eq=False)
class QDistribution:
    """2-D Gaussian outcome distribution over the alpha plane."""

    cov: np.ndarray
    mean: np.ndarray

    def density(self, alpha_x, alpha_y):
        """Probability density, vectorized over the outcome coordinates."""
        det = float(self.cov[0, 0] * self.cov[1, 1] - self.cov[0, 1] ** 2)
        dx = np.asarray(alpha_x, dtype=float) - self.mean[0]
        dy = np.asarray(alpha_y, dtype=float) - self.mean[1]
        quad = (
            self.cov[1, 1] * dx * dx - 2.0 * self.cov[0, 1] * dx * dy + self.cov[0, 0] * dy * dy
        ) / det
        return np.exp(-0.5 * quad) / (2.0 * math.pi * math.sqrt(det))


def povm_distribution(p: GaussianParams, spec: PovmFamilySpec) -> QDistribution:
    """Outcome distribution of the measurement on state ``p``.

    The squeeze maps the covariance to M C M^T; projecting onto coherent
    states then adds one vacuum unit, giving Q-covariance (M C M^T + I)/4
    and mean M m.  For r = 0 this is the plain Husimi Q of the state.
    """
    if spec.homodyne_limit:
        raise ValueError("homodyne-limit member has no 2-D outcome distribution")
    state = covariance_from_params(p)
    m = SymplecticMap.squeezing(math.exp(2.0 * spec.r), spec.theta_u).matrix
    transformed = m @ state.cov @ m.T
    cov = (transformed + np.eye(2)) / 4.0
    return QDistribution(cov, m @ state.mean)


def povm_overlap(p1: GaussianParams, p2: GaussianParams, spec: PovmFamilySpec) -> float:
    """Bhattacharyya overlap of the outcome distributions of the two states.

    Closed 2-D Gaussian form; always >= the fidelity of the pair.  The
    homodyne-limit member returns the 1-D overlap at angle theta_u.
    """
    if spec.homodyne_limit:
        return overlap_at(p1, p2, spec.theta_u)
    q1 = povm_distribution(p1, spec)
    q2 = povm_distribution(p2, spec)
    pooled = 0.5 * (q1.cov + q2.cov)
    det1 = float(q1.cov[0, 0] * q1.cov[1, 1] - q1.cov[0, 1] ** 2)
    det2 = float(q2.cov[0, 0] * q2.cov[1, 1] - q2.cov[0, 1] ** 2)
    detp = float(pooled[0, 0] * pooled[1, 1] - pooled[0, 1] ** 2)
    diff = q2.mean - q1.mean
    quad = (
        pooled[1, 1] * diff[0] * diff[0]
        - 2.0 * pooled[0, 1] * diff[0] * diff[1]
        + pooled[0, 0] * diff[1] * diff[1]
    ) / detp
    return (det1 * det2) ** 0.25 / math.sqrt(detp) * math.exp(-0.125 * quad)


@dataclass(frozen=True, eq=False)
class ConjectureScanRow:
    r: float
    min_overlap: float
    argmin_theta: float


@dataclass(frozen=True, eq=False)
class ConjectureScan:
    """Evidence table for the large-r conjecture on one state pair."""

    rows: list[ConjectureScanRow]
    homodyne_min: float
    fidelity: float
    monotone_decreasing: bool


def conjecture_scan(
    p1: GaussianParams,
    p2: GaussianParams,
    r_grid,
    theta_grid=None,
) -> ConjectureScan:
    """Minimize the family overlap over theta_u for each squeeze degree.

    Reference rows carry the homodyne-detection minimum and the fidelity.
    Monotonicity of the minima in r is reported from the data, not assumed.
    """
    if theta_grid is None:
        theta_grid = np.linspace(0.0, math.pi, 64, endpoint=False)
    rows = []
    for r in r_grid:
        best_val = math.inf
        best_theta = 0.0
        for theta in theta_grid:
            val = povm_overlap(p1, p2, PovmFamilySpec(float(r), float(theta)))
            if val < best_val:
                best_val = val
                best_theta = float(theta)
        rows.append(ConjectureScanRow(float(r), best_val, best_theta))
    _, homodyne_min = minimize_overlap(p1, p2)
    fid = fidelity_params(p1, p2).fidelity
    mins = [row.min_overlap for row in rows]
    monotone = all(b <= a + 1e-12 for a, b in zip(mins, mins[1:]))
    return ConjectureScan(rows, homodyne_min, fid, monotone)
