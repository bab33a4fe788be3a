"""Adaptive 1-D quadrature and averaging over spheres."""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError

# Kronrod 15-point abscissae on [-1, 1] (non-negative half); odd indices are the
# 7-point Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

MC_CHUNK = 4096


class QuadResult(NamedTuple):
    value: float
    error: float
    panels: int


def gk15(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod panel: (K15 estimate, |K15 - G7|)."""
    half = 0.5 * (b - a)
    fx = np.asarray(f(0.5 * (a + b) + half * NODES), dtype=float)
    k = half * float(np.dot(KRONROD_WEIGHTS, fx))
    g = half * float(np.dot(GAUSS_WEIGHTS, fx))
    return k, abs(k - g)


def integrate(f, a, b, *, rel_tol=1e-10, abs_tol=0.0, max_subdivisions=10_000,
              breakpoints=()) -> QuadResult:
    """Globally adaptive G7-K15 quadrature of a vectorised ``f`` over [a, b].

    The panel with the largest error estimate is bisected until the summed
    estimate drops below max(abs_tol, rel_tol * |integral|). ``breakpoints``
    seed the initial partition (use them at kinks of the integrand).
    Non-finite panel values are returned immediately as the integral.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"integration requires a < b, got [{a}, {b}]")
    edges = sorted({a, b, *(float(t) for t in breakpoints if a < t < b)})
    heap = []
    total = err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = gk15(f, lo, hi)
        if not math.isfinite(v):
            return QuadResult(v, math.inf, len(heap) + 1)
        heapq.heappush(heap, (-e, lo, hi, v))
        total += v
        err += e
    panels = len(heap)
    while err > max(abs_tol, rel_tol * abs(total)):
        if panels >= max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature exceeded {max_subdivisions} subdivisions "
                f"(estimate {total:.6g} +/- {err:.2g})", QuadResult(total, err, panels))
        neg_e, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        if not (math.isfinite(v1) and math.isfinite(v2)):
            return QuadResult(v1 + v2, math.inf, panels + 1)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        panels += 1
        # re-sum rather than update incrementally to keep roundoff from drifting
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(-item[0] for item in heap)
    return QuadResult(total, err, panels)


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for sphere averages and radial integrals.

    sphere_rule is "auto" (product rule for n <= 3, Monte Carlo above),
    "product" or "monte_carlo". ``order`` is the number of nodes per angular
    direction of the product rule.
    """

    sphere_rule: str = "auto"
    order: int = 64
    samples: int = 100_000
    seed: int | None = 42
    rel_tol: float = 1e-10
    max_subdivisions: int = 10_000
    workers: int = 1

    def __post_init__(self):
        if self.sphere_rule not in ("auto", "product", "monte_carlo"):
            raise DomainError(f"unknown sphere rule {self.sphere_rule!r}")
        if not 0 < self.rel_tol <= 1e-2:
            raise DomainError(f"rel_tol must lie in (0, 1e-2], got {self.rel_tol}")
        if self.samples < 1000:
            raise DomainError(f"Monte Carlo needs >= 1000 samples, got {self.samples}")
        if self.order < 2:
            raise DomainError(f"product rule order must be >= 2, got {self.order}")
        if self.max_subdivisions < 1 or self.workers < 1:
            raise DomainError("max_subdivisions and workers must be positive")

    def rule_for(self, n: int) -> str:
        if self.sphere_rule == "auto":
            return "product" if n <= 3 else "monte_carlo"
        return self.sphere_rule


class MeanEstimate(NamedTuple):
    value: float
    stderr: float
    evaluations: int


@lru_cache(maxsize=16)
def product_rule(n: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-sphere nodes and weights (summing to 1) for n = 2 or 3.

    Circle: equispaced trapezoid rule. Two-sphere: Gauss-Legendre in the
    polar cosine times a 2*order trapezoid rule in azimuth.
    """
    if n == 2:
        t = 2 * np.pi * np.arange(order) / order
        dirs = np.column_stack([np.cos(t), np.sin(t)])
        w = np.full(order, 1.0 / order)
    elif n == 3:
        z, wz = np.polynomial.legendre.leggauss(order)
        m = 2 * order
        phi = 2 * np.pi * np.arange(m) / m
        zz, pp = np.meshgrid(z, phi, indexing="ij")
        s = np.sqrt(1 - zz**2)
        dirs = np.column_stack([(s * np.cos(pp)).ravel(), (s * np.sin(pp)).ravel(), zz.ravel()])
        w = np.repeat(wz / 2, m) / m
    else:
        raise DomainError(f"product sphere rule only implemented for n in (2, 3), got {n}")
    dirs.flags.writeable = False
    w.flags.writeable = False
    return dirs, w


@lru_cache(maxsize=64)
def _mc_chunk_directions(n: int, seed: int, chunk: int, pairs: int) -> np.ndarray:
    # One Philox stream per chunk, keyed by (seed, chunk): the draws do not
    # depend on how chunks are scheduled.
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    u = rng.standard_normal((pairs, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    u.flags.writeable = False
    return u


def _chunk_sizes(samples: int) -> list[int]:
    pairs_total = samples // 2
    per = MC_CHUNK // 2
    sizes = [per] * (pairs_total // per)
    if pairs_total % per:
        sizes.append(pairs_total % per)
    return sizes


def sphere_average(func, center, r, n, quad: QuadratureSpec | None = None) -> MeanEstimate:
    """Average of ``func`` over the sphere |x - center| = r in R^n.

    ``func`` maps an (m, n) array of points to m values. Monte Carlo uses
    antithetic pairs (u, -u); its standard error is computed over pair means.
    The same unit directions are used for every radius, so the estimate is a
    smooth function of r for a fixed seed.
    """
    quad = quad or QuadratureSpec()
    if not r > 0:
        raise DomainError(f"sphere radius must be > 0, got {r}")
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    if c.shape != (n,):
        raise DomainError(f"center must have {n} coordinates")

    if quad.rule_for(n) == "product":
        dirs, w = product_rule(n, quad.order)
        vals = np.asarray(func(c + r * dirs), dtype=float)
        return MeanEstimate(float(np.dot(w, vals)), 0.0, len(w))

    if quad.seed is None:
        raise DomainError("Monte Carlo sphere averages require an explicit seed")
    sizes = _chunk_sizes(quad.samples)

    def run(k):
        u = _mc_chunk_directions(n, int(quad.seed), k, sizes[k])
        fp = np.asarray(func(c + r * u), dtype=float)
        fm = np.asarray(func(c - r * u), dtype=float)
        pair = 0.5 * (fp + fm)
        return float(np.sum(pair)), float(np.sum(pair * pair)), pair.size

    if quad.workers > 1:
        with ThreadPoolExecutor(quad.workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]

    # fixed assembly order keeps the result independent of thread count
    s = s2 = 0.0
    m = 0
    for a, b, k in parts:
        s += a
        s2 += b
        m += k
    mean = s / m
    var = max(s2 / m - mean * mean, 0.0) * m / max(m - 1, 1)
    return MeanEstimate(mean, math.sqrt(var / m), 2 * m)
