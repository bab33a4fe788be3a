"""Weight functions Q, their spherical means, and the induced modulus bound.

For a weight Q centred at x0 and exponent p > n, the ring inequality

    M_p(f-image of ring curves) <= w_{n-1} * int q(r) eta(r)^p r^{n-1} dr

must hold for every unit-mass eta on (r1, r2). Its infimum over eta is

    w_{n-1} / (int_{r1}^{r2} r^{-(n-1)/(p-1)} q(r)^{-1/(p-1)} dr)^{p-1},

attained at eta ~ r^{-(n-1)/(p-1)} q^{-1/(p-1)}; ``prop1_bound`` computes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import REGIME_TOL, BoundReport
from .errors import DomainError
from .geometry import (SphericalRing, check_dimension, check_exponent, power_difference,
                       unit_sphere_area)
from .quadrature import MeanEstimate, QuadratureSpec, integrate, sphere_average


class QField:
    """Base class: a measurable weight Q >= 0 with a distinguished center."""

    center = None
    radial = True

    def radial_profile(self, r):
        """q(r) for radial kinds, vectorised over r."""
        raise NotImplementedError

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        c = 0.0 if self.center is None else np.asarray(self.center)
        return self.radial_profile(np.linalg.norm(pts - c, axis=1))

    def breakpoints(self) -> tuple:
        return ()

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantQ(QField):
    c: float
    center: tuple | None = None

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(f"constant Q requires finite c > 0, got {self.c}")

    def radial_profile(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.c)

    def to_config(self):
        return {"kind": "constant", "params": {"c": self.c}}


@dataclass(frozen=True)
class PowerLawQ(QField):
    """Q(x) = K |x - x0|^alpha."""

    K: float
    alpha: float
    center: tuple | None = None

    def __post_init__(self):
        if not (math.isfinite(self.K) and self.K > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"power-law Q requires finite K > 0 and alpha, got {self.K}, {self.alpha}")

    def radial_profile(self, r):
        return self.K * np.asarray(r, dtype=float) ** self.alpha

    def to_config(self):
        return {"kind": "power_law", "params": {"K": self.K, "alpha": self.alpha}}


@dataclass(frozen=True)
class PiecewisePowerQ(QField):
    """q(r) = K_i r^{alpha_i} on consecutive intervals [a_i, b_i)."""

    pieces: tuple  # ((a, b), K, alpha) triples
    center: tuple | None = None

    def __post_init__(self):
        pieces = tuple(((float(a), float(b)), float(K), float(al))
                       for (a, b), K, al in self.pieces)
        if not pieces:
            raise DomainError("piecewise Q needs at least one piece")
        for i, ((a, b), K, al) in enumerate(pieces):
            if not (0 <= a < b and K > 0 and math.isfinite(K) and math.isfinite(al)):
                raise DomainError(f"invalid piece {pieces[i]}")
            if i and pieces[i - 1][0][1] != a:
                raise DomainError("piecewise Q intervals must be contiguous")
        object.__setattr__(self, "pieces", pieces)

    @property
    def support(self):
        return self.pieces[0][0][0], self.pieces[-1][0][1]

    def radial_profile(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        if np.any((r < lo) | (r > hi)):
            raise DomainError(f"radius outside piecewise Q support [{lo}, {hi}]")
        out = np.empty_like(r)
        for (a, b), K, al in self.pieces:
            m = (r >= a) & (r <= b)
            out[m] = K * r[m] ** al
        return out

    def breakpoints(self):
        return tuple(b for (a, b), _, _ in self.pieces[:-1])

    def to_config(self):
        return {"kind": "piecewise_power",
                "params": {"pieces": [[a, b, K, al] for (a, b), K, al in self.pieces]}}


@dataclass(frozen=True)
class TabulatedRadialQ(QField):
    """q(r) linearly interpolated from a table; undefined outside the table."""

    grid: tuple
    values: tuple
    center: tuple | None = None

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise DomainError("tabulated Q needs matching 1-D grid and values, length >= 2")
        if np.any(np.diff(g) <= 0) or g[0] < 0:
            raise DomainError("tabulated Q grid must be non-negative and strictly increasing")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise DomainError("tabulated Q values must be finite and >= 0")
        object.__setattr__(self, "grid", tuple(g))
        object.__setattr__(self, "values", tuple(v))

    def radial_profile(self, r):
        r = np.asarray(r, dtype=float)
        if np.any((r < self.grid[0]) | (r > self.grid[-1])):
            raise DomainError(f"radius outside table [{self.grid[0]}, {self.grid[-1]}]")
        return np.interp(r, self.grid, self.values)

    def breakpoints(self):
        return self.grid[1:-1]

    def vanishes_on(self, r1, r2) -> bool:
        """True if q is identically 0 on some table segment meeting (r1, r2)."""
        g, v = self.grid, self.values
        return any(v[i] == 0 and v[i + 1] == 0 and g[i] < r2 and g[i + 1] > r1
                   for i in range(len(g) - 1))

    def to_config(self):
        return {"kind": "tabulated_radial",
                "params": {"grid": list(self.grid), "values": list(self.values)}}


@dataclass(frozen=True)
class GeneralQ(QField):
    """Arbitrary Q given as a vectorised function of an (m, n) point array."""

    func: Callable = field(compare=False)
    center: tuple | None = None
    radial = False

    def __call__(self, points):
        return np.asarray(self.func(np.atleast_2d(np.asarray(points, dtype=float))), dtype=float)

    def radial_profile(self, r):
        raise DomainError("general Q has no radial profile; use spherical_mean")

    def to_config(self):
        raise DomainError("general Q wraps a Python callable and cannot be serialised")


def qfield_from_config(doc: dict, center=None) -> QField:
    """Build a QField from {"kind": ..., "params": {...}}."""
    kind = doc.get("kind")
    params = doc.get("params", {})
    center = doc.get("center", center)
    if center is not None:
        center = tuple(float(c) for c in center)
    try:
        if kind == "constant":
            return ConstantQ(float(params["c"]), center)
        if kind in ("power_law", "powerlaw"):
            return PowerLawQ(float(params["K"]), float(params["alpha"]), center)
        if kind == "piecewise_power":
            return PiecewisePowerQ(tuple(((a, b), K, al) for a, b, K, al in params["pieces"]), center)
        if kind == "tabulated_radial":
            return TabulatedRadialQ(tuple(params["grid"]), tuple(params["values"]), center)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad parameters for qfield kind {kind!r}: {exc}") from exc
    raise DomainError(f"unknown or non-serialisable qfield kind {kind!r}")


def spherical_mean_estimate(q: QField, r, n, quad: QuadratureSpec | None = None) -> MeanEstimate:
    n = check_dimension(n)
    if not r > 0:
        raise DomainError(f"radius must be > 0, got {r}")
    if q.radial:
        return MeanEstimate(float(q.radial_profile(float(r))), 0.0, 0)
    return sphere_average(q, q.center, float(r), n, quad)


def spherical_mean(q: QField, r, n, quad: QuadratureSpec | None = None) -> float:
    """Mean of Q over the sphere |x - x0| = r, normalised by its area."""
    return spherical_mean_estimate(q, r, n, quad).value


def _q_of_r(q: QField, n, quad):
    if q.radial:
        return q.radial_profile

    def qr(rs):
        return np.array([sphere_average(q, q.center, float(t), n, quad).value
                         for t in np.atleast_1d(rs)])
    return qr


def _analytic_power_integral(K, alpha, r1, r2, p, n) -> float:
    # int_{r1}^{r2} r^{-(n-1)/(p-1)} (K r^alpha)^{-1/(p-1)} dr
    gap = p - n - alpha
    if abs(gap) < REGIME_TOL:
        return K ** (-1 / (p - 1)) * math.log(r2 / r1)
    s = gap / (p - 1)
    return K ** (-1 / (p - 1)) * power_difference(r2, r1, s) / s


def prop1_integral(q: QField, r1, r2, p, n, quad: QuadratureSpec | None = None,
                   method="auto") -> float:
    """int_{r1}^{r2} dr / (r^{(n-1)/(p-1)} q(r)^{1/(p-1)}).

    ``method`` is "auto" (closed forms for constant / power-law / piecewise
    power, adaptive quadrature otherwise) or "quadrature" (always adaptive).
    Returns math.inf when q vanishes on part of the interval.
    """
    p = check_exponent(p, n)
    quad = quad or QuadratureSpec()
    r1, r2 = float(r1), float(r2)
    if not 0 < r1 < r2 < math.inf:
        raise DomainError(f"requires 0 < r1 < r2 < inf, got r1={r1}, r2={r2}")
    if method not in ("auto", "quadrature"):
        raise DomainError(f"unknown method {method!r}")

    if method == "auto":
        if isinstance(q, ConstantQ):
            return _analytic_power_integral(q.c, 0.0, r1, r2, p, n)
        if isinstance(q, PowerLawQ):
            return _analytic_power_integral(q.K, q.alpha, r1, r2, p, n)
        if isinstance(q, PiecewisePowerQ):
            q.radial_profile(np.array([r1, r2]))  # support check
            total = 0.0
            for (a, b), K, al in q.pieces:
                lo, hi = max(a, r1), min(b, r2)
                if lo < hi:
                    total += _analytic_power_integral(K, al, lo, hi, p, n)
            return total
    if isinstance(q, TabulatedRadialQ) and q.vanishes_on(r1, r2):
        return math.inf

    qr = _q_of_r(q, n, quad)
    a = -(n - 1) / (p - 1)
    b = -1 / (p - 1)

    def integrand(r):
        qv = np.asarray(qr(r), dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(qv > 0, r**a * qv**b, np.inf)

    bps = q.breakpoints() if q.radial else ()
    res = integrate(integrand, r1, r2, rel_tol=quad.rel_tol,
                    max_subdivisions=quad.max_subdivisions, breakpoints=bps)
    return math.inf if not math.isfinite(res.value) else res.value


def prop1_bound(q: QField, ring: SphericalRing, p, n, quad: QuadratureSpec | None = None,
                method="auto") -> float:
    """w_{n-1} / I^{p-1} with I the integral above; 0 when I diverges."""
    p = check_exponent(p, n)
    integral = prop1_integral(q, ring.r1, ring.r2, p, n, quad, method)
    if math.isinf(integral):
        return 0.0
    return unit_sphere_area(n) / integral ** (p - 1)


def optimal_eta(q: QField, ring: SphericalRing, p, n, quad: QuadratureSpec | None = None):
    """The unit-mass eta minimising the ring functional, as a vectorised callable."""
    p = check_exponent(p, n)
    total = prop1_integral(q, ring.r1, ring.r2, p, n, quad)
    qr = _q_of_r(q, n, quad)

    def eta(r):
        r = np.asarray(r, dtype=float)
        qv = np.asarray(qr(r), dtype=float).reshape(r.shape)
        out = r ** (-(n - 1) / (p - 1)) * qv ** (-1 / (p - 1)) / total
        return float(out) if out.ndim == 0 else out
    return eta


@dataclass(frozen=True)
class StepEta:
    """Piecewise-constant eta: value heights[j] on [edges[j], edges[j+1])."""

    edges: np.ndarray
    heights: np.ndarray

    def mass(self) -> float:
        return float(np.dot(self.heights, np.diff(self.edges)))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, r, side="right") - 1, 0, len(self.heights) - 1)
        return self.heights[idx]


def random_step_eta(ring: SphericalRing, rng: np.random.Generator) -> StepEta:
    """8 to 64 equal-width pieces with exponential heights, scaled to unit mass."""
    pieces = int(rng.integers(8, 65))
    edges = np.linspace(ring.r1, ring.r2, pieces + 1)
    edges[0], edges[-1] = ring.r1, ring.r2
    heights = rng.exponential(1.0, pieces)
    heights /= np.dot(heights, np.diff(edges))
    return StepEta(edges, heights)


def _moment(q: QField, a, b, n, quad) -> float:
    # int_a^b q(r) r^{n-1} dr
    if isinstance(q, (ConstantQ, PowerLawQ)):
        K, al = (q.c, 0.0) if isinstance(q, ConstantQ) else (q.K, q.alpha)
        e = al + n
        if e == 0:
            return K * math.log(b / a)
        return K * power_difference(b, a, e) / e
    qr = _q_of_r(q, n, quad)
    bps = q.breakpoints() if q.radial else ()
    return integrate(lambda r: np.asarray(qr(r)) * r ** (n - 1), a, b, rel_tol=quad.rel_tol,
                     max_subdivisions=quad.max_subdivisions, breakpoints=bps).value


def ring_functional(q: QField, ring: SphericalRing, eta, p, n,
                    quad: QuadratureSpec | None = None) -> float:
    """w_{n-1} * int_{r1}^{r2} q(r) eta(r)^p r^{n-1} dr.

    This is the integral of Q eta^p over the ring with Q replaced by its
    spherical means. Step functions are integrated piece by piece (exactly for
    constant and power-law Q); other callables go through adaptive quadrature.
    """
    p = check_exponent(p, n)
    quad = quad or QuadratureSpec()
    if isinstance(eta, StepEta):
        total = math.fsum(h**p * _moment(q, a, b, n, quad)
                          for a, b, h in zip(eta.edges[:-1], eta.edges[1:], eta.heights) if h > 0)
    else:
        qr = _q_of_r(q, n, quad)
        total = integrate(lambda r: np.asarray(qr(r)) * np.asarray(eta(r)) ** p * r ** (n - 1),
                          ring.r1, ring.r2, rel_tol=quad.rel_tol,
                          max_subdivisions=quad.max_subdivisions).value
    return unit_sphere_area(n) * total


def ring_inequality_sample_check(q: QField, ring: SphericalRing, p, n, lhs_modulus, trials=100,
                                 seed=None, quad: QuadratureSpec | None = None,
                                 tolerance=1e-12) -> BoundReport:
    """Test lhs_modulus <= ring_functional(eta) on ``trials`` random step functions eta.

    Trial k draws from its own Philox stream keyed by (seed, k). The report
    carries the smallest right-hand side seen (the worst case).
    """
    if seed is None:
        raise DomainError("ring_inequality_sample_check requires an explicit seed")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if not lhs_modulus >= 0:
        raise DomainError(f"lhs_modulus must be >= 0, got {lhs_modulus}")
    p = check_exponent(p, n)
    rhs_values = []
    for k in range(int(trials)):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(k,))))
        rhs_values.append(ring_functional(q, ring, random_step_eta(ring, rng), p, n, quad))
    worst = int(np.argmin(rhs_values))
    failures = sum(1 for v in rhs_values
                   if not BoundReport.check(lhs_modulus, v, "<=", tolerance).verdict)
    return BoundReport.check(lhs_modulus, rhs_values[worst], "<=", tolerance,
                             label=f"ring ({ring.r1:g}, {ring.r2:g}) eta sampling",
                             trials=int(trials), seed=int(seed), worst_trial=worst,
                             failures=failures, rhs_values=rhs_values)
