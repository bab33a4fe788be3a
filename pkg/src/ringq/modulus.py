"""p-modulus of the curve family joining the two boundary spheres of a ring.

Two independent routes are provided: the closed form for p > n and a
discretised extremal-density problem solved by projected gradient descent.
The grid solver never calls the closed form, so it can serve as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .geometry import SphericalRing, check_exponent, power_difference, unit_sphere_area

MAX_RADIUS_RATIO = 1e12
ADMISSIBILITY_SLACK = 1e-9


@dataclass(frozen=True)
class DiscreteDensity:
    """Nodal values of a radial density on a monotone grid of [r1, r2]."""

    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if radii.ndim != 1 or radii.shape != values.shape:
            raise DomainError("radii and values must be 1-D arrays of equal length")
        if radii.size and np.any(np.diff(radii) <= 0):
            raise DomainError("density grid must be strictly increasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    def line_integral(self) -> float:
        """Trapezoidal integral of the density along a radial segment."""
        return float(np.trapezoid(self.values, self.radii))


@dataclass(frozen=True)
class RingModulusResult:
    value: float
    method: str  # "closed_form" or "grid_oracle"
    grid_points: int = 0
    iterations: int = 0
    objective_history: tuple = ()
    density: DiscreteDensity | None = field(default=None, repr=False)


def _check_radii(r1, r2):
    if not 0 < r1 < r2 < math.inf:
        raise DomainError(f"ring requires 0 < r1 < r2 < inf, got r1={r1}, r2={r2}")
    if r2 / r1 > MAX_RADIUS_RATIO:
        raise DomainError(f"ring ratio r2/r1 = {r2 / r1:.3g} exceeds {MAX_RADIUS_RATIO:g}")


def ring_modulus_value(r1, r2, p, n) -> float:
    """Closed-form modulus for radii 0 <= r1 < r2, p > n.

    r1 = 0 (a punctured ball) is allowed because the formula stays finite
    for p > n; radial images of rings can touch the center.
    """
    p = check_exponent(p, n)
    r1, r2 = float(r1), float(r2)
    if not 0 <= r1 < r2 < math.inf:
        raise DomainError(f"requires 0 <= r1 < r2 < inf, got r1={r1}, r2={r2}")
    e = (p - n) / (p - 1)
    bracket = r2**e if r1 == 0 else power_difference(r2, r1, e)
    return unit_sphere_area(n) * e ** (p - 1) * bracket ** (1 - p)


def ring_modulus_exact(ring: SphericalRing, p, n) -> RingModulusResult:
    """Modulus M_p of the curves joining the boundary spheres of ``ring``."""
    check_exponent(p, n)
    _check_radii(ring.r1, ring.r2)
    return RingModulusResult(ring_modulus_value(ring.r1, ring.r2, p, n), "closed_form")


def log_grid(r1, r2, points) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced nodes on [r1, r2] and their trapezoidal weights."""
    r = np.geomspace(r1, r2, points)
    r[0], r[-1] = r1, r2
    d = np.diff(r)
    w = np.empty(points)
    w[0] = d[0] / 2
    w[-1] = d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    return r, w


def project_to_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum(x) = 1}."""
    n = y.size
    tau = (y.sum() - 1.0) / n
    x = y - tau
    if x.min() >= 0:
        return x
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, n + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(y - css[rho] / (rho + 1), 0.0)


def ring_modulus_grid(ring: SphericalRing, p, n, grid_points=10_000, *,
                      max_iter=100_000, rtol=1e-12) -> RingModulusResult:
    """Minimise the discretised radial modulus functional.

    Solves  min  w_{n-1} sum_i rho_i^p r_i^{n-1} dr_i  s.t.  sum_i rho_i dr_i = 1,
    rho >= 0, over log-spaced nodes with trapezoidal weights dr_i. In the mass
    variables x_i = rho_i dr_i the constraint is the unit simplex, so each step
    is a gradient step followed by a simplex projection, with the step length
    chosen by backtracking on the standard sufficient-decrease test.
    Starts from the uniform density 1/(r2 - r1).
    """
    p = check_exponent(p, n)
    _check_radii(ring.r1, ring.r2)
    grid_points = int(grid_points)
    if grid_points < 16:
        raise DomainError(f"grid_points must be >= 16, got {grid_points}")

    r, w = log_grid(ring.r1, ring.r2, grid_points)
    coef = unit_sphere_area(n) * w ** (1 - p) * r ** (n - 1)

    def objective(x):
        return float(np.dot(coef, x**p))

    x = w / (ring.r2 - ring.r1)
    x /= x.sum()
    F = objective(x)
    history = [F]
    step = 1.0 / (p * (p - 1) * float(np.max(coef * x ** (p - 2))))

    for it in range(1, max_iter + 1):
        g = p * coef * x ** (p - 1)
        while True:
            x_new = project_to_simplex(x - step * g)
            dx = x_new - x
            F_new = objective(x_new)
            if F_new <= F + np.dot(g, dx) + np.dot(dx, dx) / (2 * step):
                break
            step *= 0.5
            if step < 1e-300:
                raise ConvergenceError("backtracking step underflow",
                                       _grid_result(F, x, r, w, grid_points, it, history))
        converged = abs(F - F_new) <= rtol * abs(F)
        x, F = x_new, F_new
        history.append(F)
        step *= 1.5
        if converged:
            return _grid_result(F, x, r, w, grid_points, it, history)

    raise ConvergenceError(f"no convergence after {max_iter} iterations",
                           _grid_result(F, x, r, w, grid_points, max_iter, history))


def _grid_result(F, x, r, w, grid_points, iterations, history):
    return RingModulusResult(F, "grid_oracle", grid_points, iterations, tuple(history),
                             DiscreteDensity(r, x / w))


def admissibility_check(density: DiscreteDensity) -> bool:
    """True iff the density integrates to at least 1 along radial segments."""
    if density.radii.size == 0:
        raise DomainError("empty density grid")
    if density.radii.size == 1 or np.any(density.values < 0):
        return False
    return density.line_integral() >= 1.0 - ADMISSIBILITY_SLACK


def extremal_density(ring: SphericalRing, p, n, radii=None, points=1001) -> DiscreteDensity:
    """Nodal values of c * r^{-(n-1)/(p-1)}, normalised by its own trapezoid sum."""
    p = check_exponent(p, n)
    r = log_grid(ring.r1, ring.r2, points)[0] if radii is None else np.asarray(radii, float)
    vals = r ** (-(n - 1) / (p - 1))
    return DiscreteDensity(r, vals / np.trapezoid(vals, r))
