"""Radial homeomorphisms x -> x0 + rho(|x - x0|) (x - x0)/|x - x0| and the
extremal maps for the growth bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .bounds import (AsymptoticBound, BoundReport, GrowthRegime, PowerLawMajorant,
                     asymptotic_constant, growth_lower_bound_finite)
from .errors import DomainError, RegimeError
from .geometry import SphericalRing, check_exponent, unit_ball_volume
from .modulus import ring_modulus_value
from .qfield import QField, QuadratureSpec, prop1_bound


class RadialProfile:
    """Strictly increasing radius profile rho on [domain_min, domain_max]."""

    domain_min = 0.0
    domain_max = math.inf

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.domain_min) or np.any(t > self.domain_max) or np.any(np.isnan(t)):
            raise DomainError(f"radius outside profile domain [{self.domain_min}, {self.domain_max}]")
        out = self._eval(t)
        return float(out) if out.ndim == 0 else out

    def image_ring(self, ring: SphericalRing) -> tuple[float, float]:
        return self(ring.r1), self(ring.r2)

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerProfile(RadialProfile):
    """rho(t) = c t^beta, t >= 0."""

    c: float
    beta: float

    def __post_init__(self):
        if not (self.c > 0 and self.beta > 0 and math.isfinite(self.c) and math.isfinite(self.beta)):
            raise DomainError(f"power profile needs c > 0, beta > 0, got c={self.c}, beta={self.beta}")

    def _eval(self, t):
        return self.c * t**self.beta

    def to_config(self):
        return {"kind": "power", "params": {"c": self.c, "beta": self.beta}}


@dataclass(frozen=True)
class LogPowerProfile(RadialProfile):
    """rho(t) = c (ln t)^gamma, t >= 1."""

    c: float
    gamma: float
    domain_min = 1.0

    def __post_init__(self):
        if not (self.c > 0 and self.gamma > 0 and math.isfinite(self.c) and math.isfinite(self.gamma)):
            raise DomainError(f"log-power profile needs c > 0, gamma > 0, got {self.c}, {self.gamma}")

    def _eval(self, t):
        return self.c * np.log(t) ** self.gamma

    def to_config(self):
        return {"kind": "log_power", "params": {"c": self.c, "gamma": self.gamma}}


@dataclass(frozen=True)
class TabulatedProfile(RadialProfile):
    """Table (t_i, rho_i), interpolated linearly in log-log coordinates.

    Exact on any stretch where rho is a pure power of t. A leading node at
    t = 0 must carry rho = 0 and is interpolated as a power law through the
    first positive node pair.
    """

    grid: tuple
    values: tuple

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise DomainError("tabulated profile needs matching 1-D grid and values, length >= 2")
        if np.any(np.diff(g) <= 0) or np.any(np.diff(v) <= 0):
            raise DomainError("tabulated profile must be strictly increasing in t and rho")
        if g[0] < 0 or (g[0] == 0) != (v[0] == 0) or np.any(v < 0):
            raise DomainError("tabulated profile needs rho >= 0 with rho = 0 exactly at t = 0")
        if g[0] == 0 and g.size < 3:
            raise DomainError("a table starting at t = 0 needs two positive nodes")
        object.__setattr__(self, "grid", tuple(g))
        object.__setattr__(self, "values", tuple(v))

    @property
    def domain_min(self):
        return self.grid[0]

    @property
    def domain_max(self):
        return self.grid[-1]

    def _eval(self, t):
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        start = 1 if g[0] == 0 else 0
        lg, lv = np.log(g[start:]), np.log(v[start:])
        flat = np.atleast_1d(t)
        out = np.zeros_like(flat)
        pos = flat > 0
        lt = np.log(flat[pos])
        # below the first positive node, continue the first segment's power law to 0
        slope0 = (lv[1] - lv[0]) / (lg[1] - lg[0])
        out[pos] = np.exp(np.where(lt < lg[0], lv[0] + slope0 * (lt - lg[0]),
                                   np.interp(lt, lg, lv)))
        return out.reshape(np.shape(t))

    def to_config(self):
        return {"kind": "tabulated", "params": {"grid": list(self.grid), "values": list(self.values)}}


@dataclass(frozen=True)
class PiecewiseProfile(RadialProfile):
    """Consecutive power segments rho(t) = c_i t^{beta_i} on [a_i, b_i], continuous."""

    pieces: tuple  # ((a, b), c, beta)

    def __post_init__(self):
        pieces = tuple(((float(a), float(b)), float(c), float(be)) for (a, b), c, be in self.pieces)
        if not pieces:
            raise DomainError("piecewise profile needs at least one piece")
        for i, ((a, b), c, be) in enumerate(pieces):
            if not (0 <= a < b and c > 0 and be > 0):
                raise DomainError(f"invalid profile piece {pieces[i]}")
            if i:
                (pa, pb), pc, pbe = pieces[i - 1]
                if pb != a:
                    raise DomainError("profile pieces must be contiguous")
                left, right = pc * a**pbe, c * a**be
                if not math.isclose(left, right, rel_tol=1e-12):
                    raise DomainError(f"profile discontinuous at t={a}: {left} vs {right}")
        object.__setattr__(self, "pieces", pieces)

    @property
    def domain_min(self):
        return self.pieces[0][0][0]

    @property
    def domain_max(self):
        return self.pieces[-1][0][1]

    def _eval(self, t):
        out = np.empty_like(t)
        for (a, b), c, be in self.pieces:
            m = (t >= a) & (t <= b)
            out[m] = c * t[m] ** be
        return out

    def to_config(self):
        return {"kind": "piecewise",
                "params": {"pieces": [[a, b, c, be] for (a, b), c, be in self.pieces]}}


def profile_from_config(doc: dict) -> RadialProfile:
    kind = doc.get("kind")
    params = doc.get("params", {})
    try:
        if kind == "power":
            return PowerProfile(float(params["c"]), float(params["beta"]))
        if kind == "log_power":
            return LogPowerProfile(float(params["c"]), float(params["gamma"]))
        if kind == "tabulated":
            return TabulatedProfile(tuple(params["grid"]), tuple(params["values"]))
        if kind == "piecewise":
            return PiecewiseProfile(tuple(((a, b), c, be) for a, b, c, be in params["pieces"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad parameters for profile kind {kind!r}: {exc}") from exc
    raise DomainError(f"unknown profile kind {kind!r}")


def make_f1(maj: PowerLawMajorant, p, n) -> PowerProfile:
    """Extremal map of the power regime: rho(t) = c t^{(p-n-alpha)/(p-n)}."""
    p = check_exponent(p, n)
    if maj.regime(p, n) is not GrowthRegime.POWER:
        raise RegimeError(f"f1 needs alpha < p - n, got alpha={maj.alpha:g}, p-n={p - n:g}")
    gap = p - n - maj.alpha
    c = maj.K ** (1 / (n - p)) * ((p - n) / gap) ** ((p - 1) / (p - n))
    return PowerProfile(c, gap / (p - n))


def make_f2(maj: PowerLawMajorant, p, n) -> LogPowerProfile:
    """Extremal map of the logarithmic regime: rho(t) = c (ln t)^{(p-1)/(p-n)}, t >= 1."""
    p = check_exponent(p, n)
    if maj.regime(p, n) is not GrowthRegime.LOGARITHMIC:
        raise RegimeError(f"f2 needs alpha = p - n, got alpha={maj.alpha:g}, p-n={p - n:g}")
    gamma = (p - 1) / (p - n)
    return LogPowerProfile(maj.K ** (1 / (n - p)) * ((p - n) / (p - 1)) ** gamma, gamma)


def apply(profile: RadialProfile, x, x0=None) -> np.ndarray:
    """Image of the point(s) x; rows of a 2-D array are mapped independently."""
    x = np.asarray(x, dtype=float)
    x0 = np.zeros(x.shape[-1]) if x0 is None else np.asarray(x0, dtype=float)
    d = x - x0
    t = np.linalg.norm(d, axis=-1, keepdims=True)
    at_center = t == 0
    if np.any(at_center) and profile.domain_min > 0:
        raise DomainError("the center lies outside the profile domain")
    rho = np.asarray(profile(t))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = x0 + np.where(at_center, 0.0, rho * d / np.where(at_center, 1.0, t))
    return out


def sup_distortion(profile: RadialProfile, R) -> float:
    """L(x0, f, R) = sup_{|x-x0| <= R} |f(x) - f(x0)| = rho(R) for increasing profiles."""
    return float(profile(float(R)))


def image_ball_volume(profile: RadialProfile, R, n) -> float:
    """m(f B(x0, R)), a ball of radius rho(R) for radial maps."""
    return unit_ball_volume(n) * sup_distortion(profile, R) ** n


def verify_ring_q(profile: RadialProfile, q: QField, rings: Sequence[SphericalRing], p, n,
                  tol=1e-10, quad: QuadratureSpec | None = None) -> list[BoundReport]:
    """Check M_p(image ring curves) <= w_{n-1}/I^{p-1} on each ring.

    The left side is the closed-form modulus of the image ring
    (rho(r1), rho(r2)); the right side is ``prop1_bound``. Each report's
    ``residual`` measures how close the map is to equality.
    """
    p = check_exponent(p, n)
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    reports = []
    for ring in rings:
        if ring.center is not None and q.center is not None and tuple(ring.center) != tuple(q.center):
            raise DomainError("ring and Q must share the same center")
        if ring.r1 < profile.domain_min or ring.r2 > profile.domain_max:
            raise DomainError(f"ring ({ring.r1:g}, {ring.r2:g}) leaves the profile domain "
                              f"[{profile.domain_min:g}, {profile.domain_max:g}]")
        a, b = profile.image_ring(ring)
        if not b > a:
            raise DomainError(f"image of ring ({ring.r1:g}, {ring.r2:g}) is degenerate")
        lhs = ring_modulus_value(a, b, p, n)
        rhs = prop1_bound(q, ring, p, n, quad)
        reports.append(BoundReport.check(lhs, rhs, "<=", tol, label=f"{ring.r1:.17g}:{ring.r2:.17g}",
                                         r1=ring.r1, r2=ring.r2, image_r1=a, image_r2=b))
    return reports


class SweepRow(NamedTuple):
    R: float
    L: float
    normalizer: float
    ratio: float
    finite_bound: float


@dataclass(frozen=True)
class GrowthSweep:
    rows: tuple
    constant: float
    asymptotics: AsymptoticBound = field(repr=False, default=None)

    def column(self, name) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def growth_sweep(profile: RadialProfile, maj: PowerLawMajorant, p, n, R_grid) -> GrowthSweep:
    """Tabulate L(R), the normaliser, their ratio and the finite-R lower bound."""
    p = check_exponent(p, n)
    Rs = [float(R) for R in R_grid]
    if not Rs:
        raise DomainError("empty R grid")
    if any(b <= a for a, b in zip(Rs, Rs[1:])):
        raise DomainError("R grid must be strictly increasing")
    floor = max(maj.r0, profile.domain_min)
    if Rs[0] <= floor:
        raise DomainError(f"all R must exceed max(r0, domain_min) = {floor:g}")
    asym = asymptotic_constant(maj, p, n)
    rows = []
    for R in Rs:
        L = sup_distortion(profile, R)
        norm = asym.normalizer(R)
        rows.append(SweepRow(R, L, norm, L / norm, growth_lower_bound_finite(R, maj, p, n)))
    return GrowthSweep(tuple(rows), asym.constant, asym)
