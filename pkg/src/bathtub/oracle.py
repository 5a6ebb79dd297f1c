"""Independent finite-difference eigenvalue oracle.

The operator is discretized by the central second difference on a uniform
grid with Dirichlet ends, giving a symmetric tridiagonal matrix whose lowest
eigenvalues are found by Sturm-sequence bisection (LAPACK's stebz driver).
Running two grids and Richardson-extrapolating the O(h^2) discretization
error yields fourth-order values with a built-in error estimate.  This path
shares nothing with the angle-function solver, so agreement between the two
is genuine cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ConvergenceError, DomainError
from .model import ModelParams, potential
from .quantization import bohr_sommerfeld

DEFAULT_POINTS = 16001

# how far (in units of hbar*max frequency) the walls must rise above the
# highest requested eigenvalue
WALL_MARGIN = 50.0


@dataclass(frozen=True)
class GridSpec:
    """Uniform Dirichlet grid; the end points x_min/x_max are excluded."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise DomainError("grid needs x_min < x_max")
        if self.n_points < 3:
            raise DomainError("grid needs at least 3 interior points")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points + 1)

    @property
    def interior(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(1, self.n_points + 1)


def default_grid(p: ModelParams, count, n_points=DEFAULT_POINTS) -> GridSpec:
    """Domain sized so the potential walls exceed the target energy range."""
    threshold = bohr_sommerfeld(count + 2, p) + WALL_MARGIN * p.hbar * max(
        p.omega_minus, p.omega_plus
    )
    reach = math.sqrt(2.0 * threshold / p.m)
    return GridSpec(
        x_min=-reach / p.omega_minus,
        x_max=p.ell + reach / p.omega_plus,
        n_points=n_points,
    )


def build_operator(p: ModelParams, grid: GridSpec):
    """Symmetric tridiagonal coefficients (diagonal, off-diagonal)."""
    h = grid.spacing
    kinetic = p.hbar**2 / (p.m * h * h)
    diag = kinetic + potential(grid.interior, p)
    off = np.full(grid.n_points - 1, -0.5 * kinetic)
    return diag, off


def sturm_count(diag, off, lam) -> int:
    """Number of eigenvalues strictly below ``lam`` (Sturm sequence)."""
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    tiny = np.finfo(float).tiny
    count = 0
    q = diag[0] - lam
    if q < 0:
        count += 1
    for i in range(1, len(diag)):
        if q == 0.0:
            q = tiny
        q = diag[i] - lam - off[i - 1] * off[i - 1] / q
        if q < 0:
            count += 1
    return count


def lowest_eigenvalues(diag, off, count):
    """The ``count`` smallest eigenvalues via bisection (LAPACK stebz)."""
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    if count > len(diag):
        raise DomainError("cannot request more eigenvalues than grid points")
    vals = eigvalsh_tridiagonal(
        diag, off, select="i", select_range=(0, count - 1), lapack_driver="stebz"
    )
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("tridiagonal bisection returned non-finite values")
    return vals


def oracle_eigenvalues(p: ModelParams, count, n_points=DEFAULT_POINTS, tol=None):
    """Richardson-extrapolated lowest eigenvalues with error estimates.

    Two grids with ``n_points`` and ``2*n_points - 1`` interior points are
    solved; the eigenvalues are combined with the exact spacing ratio
    (rho = h1/h2) as (rho^2 v2 - v1)/(rho^2 - 1), cancelling the O(h^2)
    error.  The per-eigenvalue estimate is |v2 - v1|, an upper bound on the
    fine-grid error well beyond the extrapolated one.  If ``tol`` is given
    and an estimate exceeds it, the batch is rejected rather than silently
    returned.
    """
    if count > 100:
        raise DomainError("the discretization oracle serves at most 100 eigenvalues")
    grid1 = default_grid(p, count, n_points)
    grid2 = default_grid(p, count, 2 * n_points - 1)
    v1 = lowest_eigenvalues(*build_operator(p, grid1), count)
    v2 = lowest_eigenvalues(*build_operator(p, grid2), count)
    rho2 = (grid1.spacing / grid2.spacing) ** 2
    values = (rho2 * v2 - v1) / (rho2 - 1.0)
    estimates = np.abs(v2 - v1)
    if tol is not None and np.any(estimates > tol):
        worst = int(np.argmax(estimates))
        raise ConvergenceError(
            "oracle error estimate %.3e at index %d exceeds tol %.3e"
            % (estimates[worst], worst, tol)
        )
    return values, estimates
