"""Truncated Fock-space oracle.

Rebuilds the states as dense density matrices in a photon-number basis and
recomputes fidelity, homodyne marginals, and overlaps from first principles
(operator exponentials, eigendecompositions, quadrature wavefunctions).  No
Gaussian closed form is reused, so these routines serve as an independent
check on the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import TruncationError
from .states import GaussianParams

LEAKAGE_TOL = 1e-6
AUTO_LEAKAGE_TOL = 1e-8
BOUNDARY_TOL = 1e-10
MAX_AUTO_DIM = 1024


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense Hermitian operator in a truncated number basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise ValueError("operator is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def leakage(self) -> float:
        """Probability lost past the truncation (1 - trace, for states)."""
        return 1.0 - self.trace


@lru_cache(maxsize=32)
def annihilation(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1.0, dim)), k=1).astype(complex)
    a.setflags(write=False)
    return a


def displacement_op(alpha: complex, dim: int) -> np.ndarray:
    a = annihilation(dim)
    return expm(alpha * a.conj().T - np.conjugate(alpha) * a)


def squeeze_op(r: float, theta: float, dim: int) -> np.ndarray:
    """Squeeze operator whose phase-space major axis lies along ``theta``.

    The generator carries phase 2*theta: exp[(r/2)(e^{2i theta} a^dag^2 - h.c.)]
    amplifies the quadrature X_theta by e^r, matching the covariance
    parameterization used by the closed forms.
    """
    a = annihilation(dim)
    phase = np.exp(2.0j * theta)
    gen = 0.5 * r * (phase * a.conj().T @ a.conj().T - np.conjugate(phase) * a @ a)
    return expm(gen)


def thermal_weights(nbar: float, dim: int) -> np.ndarray:
    if nbar <= 0.0:
        w = np.zeros(dim)
        w[0] = 1.0
        return w
    ratio = nbar / (nbar + 1.0)
    return ratio ** np.arange(dim) / (nbar + 1.0)


def adequate_dim(p: GaussianParams) -> int:
    """Truncation heuristic: grows with thermal, squeeze, and displacement energy."""
    energy = p.nbar + math.sinh(p.r) ** 2 + abs(p.alpha) ** 2
    return int(math.ceil(20.0 + 8.0 * energy))


def boundary_mass(op: FockOperator) -> float:
    """Occupancy of the top Fock levels; signals an inadequate truncation.

    The squeeze and displacement exponentials are unitary on the truncated
    space, so the trace deficit alone cannot see their truncation error;
    weight piling up at the cutoff can.
    """
    window = max(4, op.dim // 16)
    return float(np.sum(np.diagonal(op.matrix).real[-window:]))


def choose_dim(p: GaussianParams, min_dim: int = 0) -> int:
    """Truncation at which the state is numerically adequate.

    Starts from the energy heuristic (at least ``min_dim``) and doubles until
    both the trace deficit and the boundary occupancy are negligible.
    """
    d = max(adequate_dim(p), min_dim, 4)
    while True:
        op = _build_fixed(p, d)
        if op.leakage < AUTO_LEAKAGE_TOL and boundary_mass(op) < BOUNDARY_TOL:
            return d
        if d >= MAX_AUTO_DIM:
            raise TruncationError(
                f"state needs dim > {MAX_AUTO_DIM} (leakage {op.leakage:.3g}, "
                f"boundary mass {boundary_mass(op):.3g} at dim {d})"
            )
        d = min(2 * d, MAX_AUTO_DIM)


def build_state(p: GaussianParams, dim: int | None = None) -> FockOperator:
    """Density matrix of a displaced squeezed thermal state.

    rho = D S rho_T S^dag D^dag with rho_T the diagonal thermal state and
    D, S matrix exponentials of the truncated generators.  With ``dim=None``
    the truncation is grown automatically (see ``choose_dim``); an explicit
    ``dim`` raises TruncationError when leakage exceeds 1e-6.
    """
    if dim is None:
        return _build_fixed(p, choose_dim(p))
    op = _build_fixed(p, dim)
    if op.leakage > LEAKAGE_TOL:
        raise TruncationError(
            f"truncation dim={dim} inadequate: leakage {op.leakage:.3g} > {LEAKAGE_TOL}"
        )
    return op


def _build_fixed(p: GaussianParams, dim: int) -> FockOperator:
    rho = np.diag(thermal_weights(p.nbar, dim)).astype(complex)
    if p.s != 1.0:
        s = squeeze_op(p.r, p.theta, dim)
        rho = s @ rho @ s.conj().T
    if p.alpha != 0.0:
        d = displacement_op(p.alpha, dim)
        rho = d @ rho @ d.conj().T
    return FockOperator(rho)


def fidelity_fock(a: FockOperator, b: FockOperator) -> float:
    """tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) via Hermitian eigendecompositions.

    Small negative eigenvalues from truncation are clipped to zero before
    the square roots.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    w, v = np.linalg.eigh(a.matrix)
    w = np.where(w > -1e-10, np.clip(w, 0.0, None), w)
    if np.any(w < 0.0):
        raise ValueError("first operator has a significantly negative eigenvalue")
    # eigenvalues at roundoff scale are true zeros of near-pure states; keeping
    # them would lift sqrt noise from 1e-16 to 1e-8
    w[w < 1e-14 * w.max()] = 0.0
    rank = int(np.count_nonzero(w))
    sqrt_a = (v * np.sqrt(w)) @ v.conj().T
    inner = sqrt_a @ b.matrix @ sqrt_a
    ev = np.linalg.eigvalsh(inner)
    ev = np.where(ev > -1e-10, np.clip(ev, 0.0, None), ev)
    if np.any(ev < 0.0):
        raise ValueError("product operator has a significantly negative eigenvalue")
    # the sandwich product cannot exceed rank(sqrt_a); excess eigenvalues are
    # matmul roundoff
    if rank < ev.size:
        ev[: ev.size - rank] = 0.0
    return float(np.sum(np.sqrt(ev)))


def hermite_functions(count: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_{count-1} on ``x`` (stable recurrence)."""
    x = np.asarray(x, dtype=float)
    h = np.zeros((count, x.size))
    h[0] = math.pi**-0.25 * np.exp(-0.5 * x * x)
    if count > 1:
        h[1] = math.sqrt(2.0) * x * h[0]
    for n in range(2, count):
        h[n] = math.sqrt(2.0 / n) * x * h[n - 1] - math.sqrt((n - 1.0) / n) * h[n - 2]
    return h


def quadrature_moments(a: FockOperator, phi: float) -> tuple[float, float]:
    """Mean and variance of X_phi computed directly from the density matrix."""
    op = annihilation(a.dim)
    x = 0.5 * (op * np.exp(-1j * phi) + op.conj().T * np.exp(1j * phi))
    mean = float(np.trace(a.matrix @ x).real)
    second = float(np.trace(a.matrix @ x @ x).real)
    return mean, second - mean * mean


def marginal_fock(a: FockOperator, phi: float, grid: np.ndarray) -> np.ndarray:
    """Homodyne outcome density on ``grid`` from the number-basis state.

    p(x) = sum_mn rho_mn e^{i(n-m)phi} psi_m(x) psi_n(x) with psi_n the
    quadrature wavefunctions scaled so the vacuum variance is 1/4.  Raises
    TruncationError when the grid mass falls short of 1 by more than 1e-5.
    """
    grid = np.asarray(grid, dtype=float)
    # X_phi eigenfunctions: psi_n(x) = 2^{1/4} h_n(sqrt(2) x), rotated by e^{i n phi}
    h = 2.0**0.25 * hermite_functions(a.dim, math.sqrt(2.0) * grid)
    phases = np.exp(1j * phi * np.arange(a.dim))
    rho_rot = (phases[:, None].conj() * a.matrix) * phases[None, :]
    density = np.einsum("mk,mn,nk->k", h, rho_rot, h, optimize=True).real
    mass = float(np.trapezoid(density, grid))
    if abs(1.0 - mass) > 1e-5:
        raise TruncationError(
            f"marginal mass {mass:.8f} deviates from 1; enlarge dim or grid"
        )
    return density


def default_overlap_grid(a: FockOperator, b: FockOperator, phi: float, points: int = 4001):
    """Shared grid spanning 12 standard deviations around both marginals."""
    stats = [quadrature_moments(op, phi) for op in (a, b)]
    lo = min(m - 12.0 * math.sqrt(max(v, 1e-12)) for m, v in stats)
    hi = max(m + 12.0 * math.sqrt(max(v, 1e-12)) for m, v in stats)
    return np.linspace(lo, hi, points)


def overlap_fock(
    a: FockOperator, b: FockOperator, phi: float, grid: np.ndarray | None = None
) -> float:
    """Bhattacharyya overlap of the two homodyne marginals (trapezoidal)."""
    if grid is None:
        grid = default_overlap_grid(a, b, phi)
    pa = np.clip(marginal_fock(a, phi, grid), 0.0, None)
    pb = np.clip(marginal_fock(b, phi, grid), 0.0, None)
    return float(np.trapezoid(np.sqrt(pa * pb), grid))


def coherent_vector(alpha: complex, dim: int) -> np.ndarray:
    """Number-basis amplitudes of a coherent state (truncated)."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1.0, dim))]))
    mag = np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha) + 1e-300) - 0.5 * log_fact)
    vec = mag * np.exp(1j * n * np.angle(alpha)) if alpha != 0 else np.where(n == 0, 1.0, 0.0)
    return vec.astype(complex)


def husimi_fock(a: FockOperator, alpha: complex) -> float:
    """Husimi Q value <alpha|rho|alpha>/pi from the number basis."""
    vec = coherent_vector(alpha, a.dim)
    return float((vec.conj() @ a.matrix @ vec).real / math.pi)
