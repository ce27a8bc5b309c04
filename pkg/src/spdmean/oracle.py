"""Independent reference implementations used to validate the solvers.

These are closed forms and brute-force probes trusted at desk scale:
solver tests compare against them, never the other way around.
"""

from typing import Callable, Tuple

import numpy as np

from .errors import DomainError, NotCommuting
from .karcher import Ensemble
from .spd_core import exp_m, geodesic, log_m, sym

COMMUTE_CHECK_TOL = 1e-10


def scalar_karcher_oracle(values) -> float:
    """Geometric mean exp(mean(log v)); the exact 1x1 Karcher mean."""
    vals = np.asarray(values, dtype=float)
    if vals.size == 0 or np.any(vals <= 0):
        raise DomainError("geometric mean requires positive values")
    return float(np.exp(np.mean(np.log(vals))))


def commuting_oracle(e: Ensemble) -> np.ndarray:
    """Closed-form Karcher mean exp((1/n) Σ log Aᵢ) for commuting inputs.

    Raises
    ------
    NotCommuting
        If some pair fails ‖AB − BA‖_F ≤ 1e-10 · ‖A‖_F ‖B‖_F.
    """
    for i in range(e.n):
        for j in range(i + 1, e.n):
            a, b = e.mats[i], e.mats[j]
            comm = np.linalg.norm(a @ b - b @ a)
            if comm > COMMUTE_CHECK_TOL * np.linalg.norm(a) * np.linalg.norm(b):
                raise NotCommuting(f"matrices {i} and {j} do not commute")
    avg_log = np.zeros((e.dim, e.dim))
    for i in range(e.n):
        avg_log = avg_log + log_m(e.mats[i])
    return exp_m(sym(avg_log / e.n))


def two_matrix_oracle(a, b) -> np.ndarray:
    """Karcher mean of two matrices: the geodesic midpoint."""
    return geodesic(a, b, 0.5)


def grid_minimize_1d(f: Callable[[float], float], lo: float, hi: float,
                     points: int) -> Tuple[float, float]:
    """Grid argmin of a scalar function, log-spaced when lo > 0.

    Reference-only: never used inside the solvers.
    """
    if not lo < hi:
        raise DomainError("grid_minimize_1d requires lo < hi")
    if points < 3:
        raise DomainError("grid_minimize_1d requires at least 3 points")
    if lo > 0:
        grid = np.geomspace(lo, hi, points)
    else:
        grid = np.linspace(lo, hi, points)
    vals = np.array([f(float(x)) for x in grid])
    if not np.all(np.isfinite(vals)):
        raise DomainError("function not finite on the grid")
    k = int(np.argmin(vals))
    return float(grid[k]), float(vals[k])


def finite_diff_directional(f, x, h_dir, h: float = 1e-6) -> float:
    """Central difference (f(X + hH) − f(X − hH)) / 2h along symmetric H.

    Raises
    ------
    DomainError
        If either perturbed matrix leaves the SPD cone.
    """
    x = np.asarray(x, dtype=float)
    h_dir = np.asarray(h_dir, dtype=float)
    for sign in (1.0, -1.0):
        w = np.linalg.eigvalsh(sym(x + sign * h * h_dir))
        if w[0] <= 0:
            raise DomainError("perturbed matrix is not positive definite")
    return (f(x + h * h_dir) - f(x - h * h_dir)) / (2.0 * h)
