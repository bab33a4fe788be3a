"""Capacity lower bound for ball-like condensers and growth bounds at infinity.

Growth bounds are stated for a ring Q-homeomorphism whose spherical means
satisfy q(t) <= K t^alpha for t >= r0, with p > n. Two regimes exist:
power growth (alpha < p - n) and logarithmic growth (alpha = p - n).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, RegimeError
from .geometry import check_exponent, power_difference, unit_ball_volume

REGIME_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking ``lhs <direction> rhs`` within a relative tolerance.

    ``slack`` is rhs - lhs for "<=" and lhs - rhs for ">=", so a non-negative
    slack means the inequality holds outright. ``residual`` is |lhs - rhs|/|rhs|.
    """

    lhs: float
    rhs: float
    slack: float
    direction: str
    verdict: bool
    tolerance: float
    residual: float
    label: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def check(cls, lhs, rhs, direction="<=", tolerance=0.0, label="", **details) -> "BoundReport":
        lhs, rhs = float(lhs), float(rhs)
        if direction == "<=":
            slack = rhs - lhs
        elif direction == ">=":
            slack = lhs - rhs
        else:
            raise DomainError(f"direction must be '<=' or '>=', got {direction!r}")
        if math.isnan(lhs) or math.isnan(rhs):
            verdict = False
        elif math.isinf(rhs) or math.isinf(lhs):
            verdict = slack >= 0
        else:
            verdict = slack >= -tolerance * abs(rhs)
        if rhs == lhs:
            residual = 0.0
        elif rhs == 0 or math.isinf(rhs):
            residual = math.inf
        else:
            residual = abs(lhs - rhs) / abs(rhs)
        return cls(lhs, rhs, slack, direction, bool(verdict), float(tolerance), residual,
                   label, details)

    def as_dict(self) -> dict:
        return {"label": self.label, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "direction": self.direction, "verdict": self.verdict,
                "tolerance": self.tolerance, "residual": self.residual, **self.details}


class GrowthRegime(enum.Enum):
    POWER = "power"
    LOGARITHMIC = "logarithmic"

    @classmethod
    def classify(cls, alpha, p, n) -> "GrowthRegime":
        """Regime implied by (alpha, p, n); alpha > p - n is outside the theory."""
        gap = p - n - alpha
        if abs(gap) < REGIME_TOL:
            return cls.LOGARITHMIC
        if gap > 0:
            return cls.POWER
        raise RegimeError(f"alpha = {alpha:g} exceeds p - n = {p - n:g}; no growth bound applies")


@dataclass(frozen=True)
class PowerLawMajorant:
    """q(t) <= K t^alpha for almost every t >= r0."""

    K: float
    alpha: float
    r0: float = 1.0

    def __post_init__(self):
        for name in ("K", "alpha", "r0"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"majorant {name} must be finite")
            object.__setattr__(self, name, v)
        if self.K <= 0:
            raise DomainError(f"majorant K must be > 0, got {self.K}")
        if self.alpha < 0:
            raise DomainError(f"majorant alpha must be >= 0, got {self.alpha}")
        if self.r0 <= 0:
            raise DomainError(f"majorant r0 must be > 0, got {self.r0}")

    def regime(self, p, n) -> GrowthRegime:
        return GrowthRegime.classify(self.alpha, p, n)


def _resolve_regime(maj: PowerLawMajorant, p, n, regime) -> GrowthRegime:
    actual = maj.regime(p, n)
    if regime is None:
        return actual
    regime = GrowthRegime(regime)
    if regime is not actual:
        raise RegimeError(f"regime {regime.value} requested but alpha={maj.alpha:g}, "
                          f"p-n={p - n:g} gives {actual.value}")
    return regime


def capacity_lower_bound(vol_A, vol_C, p, n) -> float:
    """Lower bound for cap_p(A, C) in terms of the volumes m(A) > m(C) > 0."""
    p = check_exponent(p, n)
    vol_A, vol_C = float(vol_A), float(vol_C)
    if not vol_C > 0:
        raise DomainError(f"m(C) must be > 0, got {vol_C}")
    if not vol_C < vol_A < math.inf:
        raise DomainError(f"requires m(C) < m(A) < inf, got m(C)={vol_C}, m(A)={vol_A}")
    e = (p - n) / (n * (p - 1))
    bracket = power_difference(vol_A, vol_C, e)
    omega = unit_ball_volume(n)
    return n * omega ** (p / n) * ((p - n) / (p - 1)) ** (p - 1) * bracket ** (1 - p)


def growth_lower_bound_finite(R, maj: PowerLawMajorant, p, n, regime=None) -> float:
    """Lower bound on L(x0, f, R) valid for every finite R >= r0.

    Power regime: K^{1/(n-p)} ((p-n)/(p-n-a))^{(p-1)/(p-n)} (R^s - r0^s)^{(p-1)/(p-n)}
    with s = (p-n-a)/(p-1). Logarithmic regime: the bracket is ln(R/r0) and the
    ratio (p-n)/(p-n-a) becomes (p-n)/(p-1).
    """
    p = check_exponent(p, n)
    regime = _resolve_regime(maj, p, n, regime)
    R = float(R)
    if R < maj.r0:
        raise DomainError(f"R must be >= r0 = {maj.r0}, got {R}")
    return _growth_base(R, maj, p, n, regime)


def _growth_base(R, maj, p, n, regime) -> float:
    # the ratio and bracket share one power so that large exponents
    # (p close to n) do not overflow or underflow factor by factor
    expo = (p - 1) / (p - n)
    if regime is GrowthRegime.POWER:
        s = (p - n - maj.alpha) / (p - 1)
        inner = (p - n) / (p - n - maj.alpha) * power_difference(R, maj.r0, s)
    else:
        inner = (p - n) / (p - 1) * math.log(R / maj.r0)
    return maj.K ** (1 / (n - p)) * inner**expo


def volume_lower_bound(R, maj: PowerLawMajorant, p, n) -> float:
    """Lower bound on the volume m(f B(x0, R)) in the power regime."""
    p = check_exponent(p, n)
    _resolve_regime(maj, p, n, GrowthRegime.POWER)
    R = float(R)
    if R <= maj.r0:
        raise DomainError(f"R must be > r0 = {maj.r0}, got {R}")
    return unit_ball_volume(n) * _growth_base(R, maj, p, n, GrowthRegime.POWER) ** n


@dataclass(frozen=True)
class AsymptoticBound:
    """liminf L(x0, f, R) / normalizer(R) >= constant, as R -> infinity.

    normalizer(R) is R^exponent in the power regime and (ln R)^exponent in the
    logarithmic one.
    """

    regime: GrowthRegime
    exponent: float
    constant: float

    def normalizer(self, R) -> float:
        if self.regime is GrowthRegime.POWER:
            return float(R) ** self.exponent
        return math.log(R) ** self.exponent

    @property
    def description(self) -> str:
        base = "R" if self.regime is GrowthRegime.POWER else "(ln R)"
        return f"{base}^{self.exponent:.17g}"

    def __iter__(self):
        # unpacks as (description, constant)
        return iter((self.description, self.constant))


def asymptotic_constant(maj: PowerLawMajorant, p, n, regime=None) -> AsymptoticBound:
    p = check_exponent(p, n)
    regime = _resolve_regime(maj, p, n, regime)
    expo = (p - 1) / (p - n)
    if regime is GrowthRegime.POWER:
        ratio = (p - n) / (p - n - maj.alpha)
        norm_exp = (p - n - maj.alpha) / (p - n)
    else:
        ratio = (p - n) / (p - 1)
        norm_exp = expo
    return AsymptoticBound(regime, norm_exp, maj.K ** (1 / (n - p)) * ratio**expo)


def liminf_estimate(sweep) -> float:
    """Tail surrogate for the liminf of a growth sweep.

    Returns the smallest normalised ratio among rows with R in the last
    decade, [R_max / 10, R_max]. Needs at least 10 rows spanning two decades.
    Accepts a GrowthSweep or a sequence of (R, ratio) pairs.
    """
    pairs = _ratio_pairs(sweep)
    if len(pairs) < 10:
        raise DomainError(f"liminf estimate needs >= 10 rows, got {len(pairs)}")
    Rs = [R for R, _ in pairs]
    if any(b <= a for a, b in zip(Rs, Rs[1:])):
        raise DomainError("sweep radii must be strictly increasing")
    if Rs[-1] < 100 * Rs[0]:
        raise DomainError(f"sweep spans R in [{Rs[0]:g}, {Rs[-1]:g}]; need >= 2 decades")
    cutoff = Rs[-1] / 10
    return min(ratio for R, ratio in pairs if R >= cutoff)


def _ratio_pairs(sweep) -> Sequence[tuple[float, float]]:
    rows = getattr(sweep, "rows", sweep)
    out = []
    for row in rows:
        if hasattr(row, "ratio"):
            out.append((float(row.R), float(row.ratio)))
        else:
            R, ratio = row
            out.append((float(R), float(ratio)))
    return out
