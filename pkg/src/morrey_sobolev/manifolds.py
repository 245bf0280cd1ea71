"""Rotationally symmetric model manifolds dr^2 + psi(r)^2 g_{S^{n-1}}.

Geodesic spheres about the pole have area n*omega_n*psi(r)**(n-1); balls are
the radial integral of that. Built-in space forms use closed forms, custom
warps fall back on quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .constants import omega
from .exceptions import DomainError
from .specfun import QuadratureSpec, integrate

__all__ = [
    "CurvatureClass",
    "VolumeReport",
    "WarpedModel",
    "ball_volume",
    "inverse_ball_volume",
    "isoperimetric_check",
    "make_model",
    "sphere_area",
    "total_volume",
    "volume_monotonicity_report",
]

_VOLUME_QUAD = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-14, max_refinements=200)


class CurvatureClass(enum.Enum):
    CARTAN_HADAMARD = "CartanHadamard"
    NONNEGATIVE_RICCI = "NonnegativeRicci"
    FLAT = "Flat"


@dataclass(frozen=True)
class WarpedModel:
    n: int
    warp: Callable[[float], float]
    warp_derivative: Callable[[float], float]
    curvature_class: CurvatureClass
    r_max: float = math.inf
    label: str = ""
    kind: str = "custom"
    kappa: float | None = None

    @property
    def is_cartan_hadamard(self):
        return self.curvature_class in (CurvatureClass.CARTAN_HADAMARD, CurvatureClass.FLAT)

    @property
    def has_nonnegative_ricci(self):
        return self.curvature_class in (CurvatureClass.NONNEGATIVE_RICCI, CurvatureClass.FLAT)

    @property
    def is_compact(self):
        return math.isfinite(self.r_max)

    @property
    def is_euclidean(self):
        return self.kind == "euclidean"


def _check_dim(n):
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"model dimension must be an integer >= 2, got {n!r}")
    return int(n)


def make_model(kind, n, kappa=None, warp=None, warp_derivative=None,
               curvature_class=None, r_max=math.inf, label=None):
    """Build a model manifold.

    ``kind`` is one of ``euclidean``, ``hyperbolic``, ``sphere`` or ``custom``.
    Curved built-ins take a curvature magnitude ``kappa > 0``; custom models
    need ``warp``, ``warp_derivative`` and ``curvature_class``.
    """
    n = _check_dim(n)
    if kind == "euclidean":
        return WarpedModel(n, _identity, _one, CurvatureClass.FLAT, math.inf,
                           label or f"euclidean:{n}", "euclidean", None)
    if kind in ("hyperbolic", "sphere"):
        if kappa is None or not (float(kappa) > 0.0) or math.isinf(float(kappa)):
            raise DomainError(f"{kind} model needs finite kappa > 0, got {kappa!r}")
        kappa = float(kappa)
        s = math.sqrt(kappa)
        if kind == "hyperbolic":
            return WarpedModel(
                n, lambda r: math.sinh(s * r) / s, lambda r: math.cosh(s * r),
                CurvatureClass.CARTAN_HADAMARD, math.inf,
                label or f"hyperbolic:{n}:{kappa!r}", "hyperbolic", kappa,
            )
        return WarpedModel(
            n, lambda r: math.sin(s * r) / s, lambda r: math.cos(s * r),
            CurvatureClass.NONNEGATIVE_RICCI, math.pi / s,
            label or f"sphere:{n}:{kappa!r}", "sphere", kappa,
        )
    if kind == "custom":
        if warp is None or warp_derivative is None:
            raise DomainError("custom models need both warp and warp_derivative")
        if not isinstance(curvature_class, CurvatureClass):
            raise DomainError("custom models need an explicit CurvatureClass")
        r_max = float(r_max)
        if not r_max > 0.0:
            raise DomainError(f"r_max must be positive, got {r_max!r}")
        probe = 1e-6
        ratio = warp(probe) / probe
        if not abs(ratio - 1.0) <= 1e-4 or not abs(warp_derivative(probe) - 1.0) <= 1e-4:
            raise DomainError(
                f"custom warp must satisfy psi(r)/r -> 1 and psi'(0) = 1; psi(1e-6)/1e-6 = {ratio!r}"
            )
        return WarpedModel(n, warp, warp_derivative, curvature_class, r_max,
                           label or "custom", "custom", None)
    raise DomainError(f"unknown model kind {kind!r}")


def _identity(r):
    return r


def _one(r):
    return 1.0


def sphere_area(m, r):
    """Area of the geodesic sphere of radius ``r`` about the pole."""
    if not 0.0 < r < m.r_max:
        raise DomainError(f"radius {r!r} outside (0, {m.r_max!r}) for {m.label}")
    return m.n * omega(m.n) * m.warp(r) ** (m.n - 1)


def _sinh_excess(y):
    """sinh(y) - y without cancellation."""
    if abs(y) >= 1.0:
        return math.sinh(y) - y
    y2 = y * y
    term = y * y2 / 6.0
    total = term
    k = 3
    while abs(term) > 1e-17 * abs(total):
        term *= y2 / ((k + 1) * (k + 2))
        total += term
        k += 2
    return total


def _sin_deficit(y):
    """y - sin(y) without cancellation."""
    if abs(y) >= 1.0:
        return y - math.sin(y)
    y2 = y * y
    term = y * y2 / 6.0
    total = term
    k = 3
    while abs(term) > 1e-17 * abs(total):
        term *= -y2 / ((k + 1) * (k + 2))
        total += term
        k += 2
    return total


def ball_volume(m, rho):
    """Volume of the geodesic ball of radius ``rho`` about the pole."""
    rho = float(rho)
    if not 0.0 <= rho <= m.r_max:
        raise DomainError(f"radius {rho!r} outside [0, {m.r_max!r}] for {m.label}")
    if rho == 0.0:
        return 0.0
    n = m.n
    if m.kind == "euclidean":
        return omega(n) * rho**n
    if m.kind in ("hyperbolic", "sphere") and n in (2, 3):
        kappa = m.kappa
        x = math.sqrt(kappa) * rho
        if n == 2:
            trig = math.sinh(0.5 * x) if m.kind == "hyperbolic" else math.sin(0.5 * x)
            return 4.0 * math.pi * trig * trig / kappa
        excess = _sinh_excess(2.0 * x) if m.kind == "hyperbolic" else _sin_deficit(2.0 * x)
        return math.pi * excess / kappa**1.5
    area = n * omega(n)
    return integrate(lambda r: area * m.warp(r) ** (n - 1), 0.0, rho, _VOLUME_QUAD)


def total_volume(m):
    """Volume of the whole model (``inf`` for non-compact ones)."""
    if not m.is_compact:
        return math.inf
    return ball_volume(m, m.r_max)


def inverse_ball_volume(m, v, tol=1e-12):
    """Radius whose geodesic ball has volume ``v``, by monotone bisection.

    ``tol`` is the absolute radius tolerance; ``tol=0`` bisects until the
    bracket cannot shrink further in double precision.
    """
    v = float(v)
    if not v >= 0.0:
        raise DomainError(f"volume must be non-negative, got {v!r}")
    if v == 0.0:
        return 0.0
    if m.is_compact:
        full = total_volume(m)
        if v > full:
            raise DomainError(f"volume {v!r} exceeds the total volume of {m.label}")
        if v == full:
            return m.r_max
        hi = m.r_max
    else:
        hi = 1.0
        while ball_volume(m, hi) < v:
            hi *= 2.0
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if ball_volume(m, mid) < v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class VolumeReport:
    """Ratios V(rho)/(omega_n rho^n) on a radius grid with monotonicity verdicts."""

    model: str
    radii: tuple
    volumes: tuple
    ratios: tuple
    nondecreasing: bool
    nonincreasing: bool
    max_decrease: float
    max_increase: float
    small_radius_ratio: float
    comparison_holds: bool
    tolerance: float


def volume_monotonicity_report(m, grid, tol=1e-10):
    """Check the volume comparison direction expected for the curvature class.

    ``max_decrease`` (``max_increase``) is the largest drop (rise) of the ratio
    between consecutive radii, i.e. the worst violation of being nondecreasing
    (nonincreasing). Violations are reported, never raised.
    """
    radii = tuple(float(r) for r in grid)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DomainError("radius grid must be strictly increasing")
    w = omega(m.n)
    volumes = tuple(ball_volume(m, r) for r in radii)
    ratios = tuple(v / (w * r**m.n) for v, r in zip(volumes, radii))
    steps = [b - a for a, b in zip(ratios, ratios[1:])]
    max_decrease = max([0.0] + [-d for d in steps])
    max_increase = max([0.0] + steps)
    nondecreasing = max_decrease <= tol
    nonincreasing = max_increase <= tol
    if m.curvature_class is CurvatureClass.FLAT:
        holds = nondecreasing and nonincreasing
    elif m.curvature_class is CurvatureClass.CARTAN_HADAMARD:
        holds = nondecreasing and min(ratios) >= 1.0 - tol
    else:
        holds = nonincreasing and max(ratios) <= 1.0 + tol
    return VolumeReport(
        model=m.label, radii=radii, volumes=volumes, ratios=ratios,
        nondecreasing=nondecreasing, nonincreasing=nonincreasing,
        max_decrease=max_decrease, max_increase=max_increase,
        small_radius_ratio=ratios[0], comparison_holds=holds, tolerance=tol,
    )


def isoperimetric_check(m, rho):
    """Area(dB) - n omega_n^(1/n) Vol(B)^((n-1)/n) for the geodesic ball of radius rho."""
    n = m.n
    return sphere_area(m, rho) - n * omega(n) ** (1.0 / n) * ball_volume(m, rho) ** ((n - 1.0) / n)
