"""Euclidean decreasing rearrangement of radial profiles on model manifolds.

For a nonincreasing radial profile every super-level set is a geodesic ball,
so the rearrangement is a change of radius: the ball of radius rho on the
model is matched with the Euclidean ball of equal volume, radius
s(rho) = (V(rho)/omega_n)**(1/n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .constants import omega
from .exceptions import DomainError
from .manifolds import ball_volume, inverse_ball_volume, make_model, sphere_area
from .profiles import NormsReport, RadialProfile, norms_report

__all__ = [
    "PolyaSzegoReport",
    "RearrangedProfile",
    "RearrangementResult",
    "polya_szego_check",
    "level_set_volume",
    "rearrange",
]


class RearrangedProfile(RadialProfile):
    """phi*(s) = phi(rho(s)) on the Euclidean model, rho the inverse radius map."""

    kind = "rearranged"

    def __init__(self, source, model):
        self.source = source
        self.model = model
        self._omega = omega(model.n)
        self.support_volume = source.support_measure(model)
        self.lam = (self.support_volume / self._omega) ** (1.0 / model.n)
        self._knots = tuple(self.radius_map(k) for k in source.breakpoints())

    @property
    def exponents(self):
        return getattr(self.source, "exponents", None)

    def dimension(self):
        return self.model.n

    def radius_map(self, rho):
        """s(rho): radius of the Euclidean ball with the volume of B(x0, rho)."""
        return (ball_volume(self.model, rho) / self._omega) ** (1.0 / self.model.n)

    def inverse_radius(self, s):
        if s <= 0.0:
            return 0.0
        if s >= self.lam:
            return self.source.lam
        return inverse_ball_volume(self.model, self._omega * s**self.model.n, tol=0.0)

    def value(self, s):
        if s >= self.lam:
            return 0.0
        return self.source.value(self.inverse_radius(s))

    def derivative(self, s):
        if s >= self.lam or s <= 0.0:
            return 0.0
        rho = self.inverse_radius(s)
        n = self.model.n
        # d rho / d s = n omega_n s^(n-1) / Area(dB(rho))
        return self.source.derivative(rho) * n * self._omega * s ** (n - 1) / sphere_area(self.model, rho)

    def sup_norm(self):
        return self.source.sup_norm()

    def breakpoints(self):
        return self._knots

    def gradient_exponents(self):
        return self.source.gradient_exponents()

    def value_exponents(self):
        return self.source.value_exponents()

    def support_measure(self, m):
        if m.is_euclidean and m.n == self.model.n:
            return self.support_volume
        return ball_volume(m, self.lam)

    def describe(self):
        return {"kind": self.kind, "lambda": self.lam, "source": self.source.describe(),
                "source_model": self.model.label}


@dataclass(frozen=True)
class RearrangementResult:
    star_profile: RadialProfile
    radius_map: Callable[[float], float]
    report_before: NormsReport
    report_after: NormsReport


def rearrange(u, m, e, quad=None):
    """Rearrange ``u`` on ``m`` into a radial profile on Euclidean space.

    The result is always a :class:`RearrangedProfile`, also on the Euclidean
    model where it reproduces ``u`` up to rounding.
    """
    if u.lam > m.r_max:
        raise DomainError(f"profile support {u.lam!r} exceeds r_max {m.r_max!r}")
    euclid = make_model("euclidean", m.n)
    before = norms_report(u, m, e, quad)
    star = RearrangedProfile(u, m)
    after = norms_report(star, euclid, e, quad)
    return RearrangementResult(star_profile=star, radius_map=star.radius_map,
                               report_before=before, report_after=after)


@dataclass(frozen=True)
class PolyaSzegoReport:
    """Differences (model minus rearranged) of the norms; ``delta_l1`` is relative."""

    delta_grad: float
    delta_sup: float
    delta_l1: float
    star_support_radius: float
    before: NormsReport
    after: NormsReport


def polya_szego_check(u, m, e, quad=None):
    """Compare gradient, sup and L^1 norms of ``u`` on ``m`` with its rearrangement.

    Only Cartan-Hadamard (or flat) models are accepted: the gradient does not
    increase under rearrangement there because geodesic spheres satisfy the
    Euclidean isoperimetric inequality.
    """
    if not m.is_cartan_hadamard:
        raise DomainError(f"Polya-Szego direction is not guaranteed on {m.label}")
    res = rearrange(u, m, e, quad)
    b, a = res.report_before, res.report_after
    delta_l1 = (b.l1_norm - a.l1_norm) / b.l1_norm if b.l1_norm else 0.0
    return PolyaSzegoReport(
        delta_grad=b.grad_lp_norm - a.grad_lp_norm,
        delta_sup=b.sup_norm - a.sup_norm,
        delta_l1=delta_l1,
        star_support_radius=res.star_profile.lam,
        before=b,
        after=a,
    )


def level_set_volume(u, m, t):
    """Vol({u > t}) for a nonincreasing radial profile on ``m``.

    The level radius is found by bisection on [0, lam]; on a plateau at height
    ``t`` the leftmost preimage is taken.
    """
    if t >= u.sup_norm():
        return 0.0
    if t < 0.0:
        return math.inf
    lo, hi = 0.0, u.lam
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or hi - lo <= 1e-12:
            break
        if u.value(mid) > t:
            lo = mid
        else:
            hi = mid
    return ball_volume(m, hi)
