"""Dimensional constants, spherical rings and ball condensers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedExponentError

MAX_DIMENSION = 16


def check_dimension(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    if n > MAX_DIMENSION:
        raise DomainError(f"dimension capped at {MAX_DIMENSION}, got {n}")
    return n


def check_exponent(p, n) -> float:
    """Validate the pair (p, n) and return p as a float; requires p > n."""
    n = check_dimension(n)
    p = float(p)
    if not math.isfinite(p):
        raise DomainError(f"exponent must be finite, got {p}")
    if p <= n:
        raise UnsupportedExponentError(f"requires p > n (got p={p:g}, n={n})")
    return p


def power_difference(x, y, s) -> float:
    """x^s - y^s for 0 < y <= x, accurate when s is tiny."""
    return y**s * math.expm1(s * math.log(x / y))


def unit_sphere_area(n) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n, 2 pi^{n/2} / Gamma(n/2)."""
    n = check_dimension(n)
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def unit_ball_volume(n) -> float:
    n = check_dimension(n)
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def ball_volume(R, n) -> float:
    R = float(R)
    if not R >= 0:
        raise DomainError(f"radius must be >= 0, got {R}")
    return unit_ball_volume(n) * R**n


def _as_center(center, n=None):
    if center is None:
        return None
    c = tuple(float(v) for v in np.atleast_1d(np.asarray(center, dtype=float)))
    if n is not None and len(c) != n:
        raise DomainError(f"center has {len(c)} coordinates, expected {n}")
    if not all(math.isfinite(v) for v in c):
        raise DomainError("center coordinates must be finite")
    return c


@dataclass(frozen=True)
class SphericalRing:
    """Open ring {x : r1 < |x - center| < r2}; ``center=None`` is the origin."""

    r1: float
    r2: float
    center: tuple | None = None

    def __post_init__(self):
        r1, r2 = float(self.r1), float(self.r2)
        if not (math.isfinite(r1) and math.isfinite(r2)):
            raise DomainError("ring radii must be finite")
        if not 0 < r1 < r2:
            raise DomainError(f"ring requires 0 < r1 < r2, got r1={r1}, r2={r2}")
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "center", _as_center(self.center))

    def scaled(self, lam: float) -> "SphericalRing":
        """Ring with both radii multiplied by lam (center kept)."""
        return SphericalRing(lam * self.r1, lam * self.r2, self.center)


@dataclass(frozen=True)
class BallCondenser:
    """Condenser (A, C) with A the open ball of radius R_outer and C the
    closed ball of radius r_inner, both about ``center``."""

    R_outer: float
    r_inner: float
    center: tuple | None = None

    def __post_init__(self):
        R, r = float(self.R_outer), float(self.r_inner)
        if not (math.isfinite(R) and 0 < r < R):
            raise DomainError(f"condenser requires 0 < r_inner < R_outer, got {r}, {R}")
        object.__setattr__(self, "R_outer", R)
        object.__setattr__(self, "r_inner", r)
        object.__setattr__(self, "center", _as_center(self.center))

    def volumes(self, n) -> tuple[float, float]:
        """Lebesgue measures (m(A), m(C)) in R^n."""
        return ball_volume(self.R_outer, n), ball_volume(self.r_inner, n)

    def ring(self) -> SphericalRing:
        """The ring A \\ C whose separating curve family carries the capacity."""
        return SphericalRing(self.r_inner, self.R_outer, self.center)
