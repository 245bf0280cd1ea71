"""Radial test functions u(x) = phi(d(x0, x)) and their Morrey-Sobolev quotients.

Every profile is nonincreasing on [0, lam] and vanishes beyond ``lam``. All
norms on a model reduce to one-dimensional integrals against the sphere area
n*omega_n*psi(r)**(n-1).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .constants import Exponents, omega
from .exceptions import DomainError
from .manifolds import ball_volume, total_volume
from .specfun import QuadratureSpec, beta, integrate, reg_inc_beta

__all__ = [
    "NORM_QUADRATURE",
    "Constant",
    "NormsReport",
    "PiecewiseLinear",
    "PowerExtremal",
    "RadialProfile",
    "TalentiExtremal",
    "F_lambda",
    "F_lambda_direct",
    "f_lambda",
    "make_profile",
    "norms_report",
    "quotient",
]

NORM_QUADRATURE = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-12, max_refinements=400)


def f_lambda(e, lam, r):
    """r**((1-n)/(p-1)) * (lam**n - r**n)**(1/(p-1)) on (0, lam)."""
    n, p = e.n, e.p
    return r ** ((1.0 - n) / (p - 1.0)) * max(lam**n - r**n, 0.0) ** (1.0 / (p - 1.0))


def _talenti_beta(e):
    return e.talenti_a, e.p_conj


def F_lambda(e, lam, s):
    """Primitive of :func:`f_lambda` from 0 to ``s``, via the incomplete beta function."""
    lam = float(lam)
    s = float(s)
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    if not 0.0 <= s <= lam:
        raise DomainError(f"s={s!r} outside [0, {lam!r}]")
    a, b = _talenti_beta(e)
    return lam**e.p_conj / e.n * beta(a, b) * reg_inc_beta((s / lam) ** e.n, a, b)


def _F_tail(e, lam, s):
    """F(lam) - F(s), computed through the complementary incomplete beta."""
    a, b = _talenti_beta(e)
    scale = lam**e.p_conj / e.n * beta(a, b)
    if s <= 0.0:
        return scale
    if s >= lam:
        return 0.0
    x = (s / lam) ** e.n
    if x < 0.5:
        return scale * (1.0 - reg_inc_beta(x, a, b))
    return scale * reg_inc_beta(-math.expm1(e.n * math.log(s / lam)), b, a)


def F_lambda_direct(e, lam, s, quad=None):
    """Primitive of :func:`f_lambda` by singular quadrature (independent of :func:`F_lambda`)."""
    if not 0.0 <= s <= lam:
        raise DomainError(f"s={s!r} outside [0, {lam!r}]")
    if s == 0.0:
        return 0.0
    quad = quad or NORM_QUADRATURE
    n, p = e.n, e.p
    right = 1.0 / (p - 1.0) if s == lam else 0.0
    spec = quad.with_exponents((1.0 - n) / (p - 1.0), right)
    return integrate(lambda r: f_lambda(e, lam, r), 0.0, s, spec)


class RadialProfile:
    """Base class for nonincreasing radial profiles supported on [0, lam].

    Subclasses provide ``value``/``derivative`` and declare the power-law
    behaviour of their integrands at the ends of each smooth piece.
    """

    kind = "abstract"
    lam: float

    def value(self, r):
        raise NotImplementedError

    def derivative(self, r):
        raise NotImplementedError

    def sup_norm(self):
        return self.value(0.0)

    def breakpoints(self):
        """Radii splitting [0, lam] into pieces where the profile is smooth."""
        return (0.0, self.lam)

    def gradient_exponents(self):
        """(left, right) exponents of |phi'|^p psi^(n-1) at 0 and lam."""
        return 0.0, 0.0

    def value_exponents(self):
        return 0.0, 0.0

    def support_measure(self, m):
        return ball_volume(m, self.lam)

    def dimension(self):
        e = getattr(self, "exponents", None)
        return None if e is None else e.n

    def describe(self):
        return {"kind": self.kind, "lambda": self.lam}


class PowerExtremal(RadialProfile):
    """(lam**beta - r**beta)_+ with beta = (p - n)/(p - 1)."""

    kind = "power"

    def __init__(self, exponents, lam):
        self.exponents = exponents
        self.lam = float(lam)
        self._beta = exponents.morrey_exponent

    def value(self, r):
        if r >= self.lam:
            return 0.0
        return self.lam**self._beta - r**self._beta

    def derivative(self, r):
        if r >= self.lam:
            return 0.0
        return -self._beta * r ** (self._beta - 1.0)

    def gradient_exponents(self):
        e = self.exponents
        return -(e.n - 1.0) / (e.p - 1.0), 0.0

    def value_exponents(self):
        return self.exponents.n - 1.0, 1.0


class TalentiExtremal(RadialProfile):
    """F_lam(lam) - F_lam(r), the L^1-bound extremal."""

    kind = "talenti"

    def __init__(self, exponents, lam):
        self.exponents = exponents
        self.lam = float(lam)

    def value(self, r):
        return _F_tail(self.exponents, self.lam, r)

    def derivative(self, r):
        if r >= self.lam:
            return 0.0
        return -f_lambda(self.exponents, self.lam, r)

    def sup_norm(self):
        return F_lambda(self.exponents, self.lam, self.lam)

    def gradient_exponents(self):
        e = self.exponents
        return -(e.n - 1.0) / (e.p - 1.0), e.p_conj

    def value_exponents(self):
        return self.exponents.n - 1.0, self.exponents.p_conj


class PiecewiseLinear(RadialProfile):
    """Linear interpolation of ``values`` at ``knots``; knots start at 0, values end at 0."""

    kind = "linear"

    def __init__(self, knots, values):
        knots = tuple(float(k) for k in knots)
        values = tuple(float(v) for v in values)
        if len(knots) != len(values) or len(knots) < 2:
            raise DomainError("need at least two knots with one value each")
        if knots[0] != 0.0:
            raise DomainError(f"first knot must be 0, got {knots[0]!r}")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise DomainError("knots must be strictly increasing")
        if any(b > a for a, b in zip(values, values[1:])):
            raise DomainError("values must be nonincreasing")
        if values[-1] != 0.0:
            raise DomainError("terminal value must be 0 for a compactly supported Lipschitz profile")
        if values[0] < 0.0:
            raise DomainError("values must be non-negative")
        self.knots = knots
        self.values = values
        self.lam = knots[-1]
        self.slopes = tuple((v1 - v0) / (k1 - k0)
                            for k0, k1, v0, v1 in zip(knots, knots[1:], values, values[1:]))

    def _segment(self, r):
        i = bisect.bisect_right(self.knots, r) - 1
        return min(max(i, 0), len(self.slopes) - 1)

    def value(self, r):
        if r >= self.lam:
            return 0.0
        if r <= 0.0:
            return self.values[0]
        i = self._segment(r)
        return self.values[i] + self.slopes[i] * (r - self.knots[i])

    def derivative(self, r):
        if r >= self.lam or r < 0.0:
            return 0.0
        return self.slopes[self._segment(r)]

    def breakpoints(self):
        return self.knots

    def describe(self):
        return {"kind": self.kind, "lambda": self.lam, "knots": list(self.knots),
                "values": list(self.values)}


class Constant(RadialProfile):
    """The constant ``level`` on a compact model; its support is the whole manifold."""

    kind = "constant"

    def __init__(self, level, lam):
        self.level = float(level)
        self.lam = float(lam)
        if not self.level > 0.0:
            raise DomainError(f"constant level must be positive, got {level!r}")

    def value(self, r):
        return self.level

    def derivative(self, r):
        return 0.0

    def describe(self):
        return {"kind": self.kind, "lambda": self.lam, "level": self.level}


def make_profile(kind, e=None, lam=None, knots=None, values=None, model=None, level=None):
    """Construct a profile by kind name: ``power``, ``talenti``, ``linear`` or ``constant``."""
    r_max = model.r_max if model is not None else math.inf
    if kind == "constant":
        if model is None or not model.is_compact:
            raise DomainError("constant profiles are only admissible on compact models")
        return Constant(1.0 if level is None else level, model.r_max)
    if kind == "linear":
        profile = PiecewiseLinear(knots, values)
        if lam is not None and float(lam) != profile.lam:
            raise DomainError(f"lambda {lam!r} does not match the last knot {profile.lam!r}")
    elif kind in ("power", "talenti"):
        if not isinstance(e, Exponents):
            raise DomainError(f"{kind} profile needs an Exponents bundle")
        if lam is None or not float(lam) > 0.0:
            raise DomainError(f"lambda must be positive, got {lam!r}")
        profile = (PowerExtremal if kind == "power" else TalentiExtremal)(e, lam)
    else:
        raise DomainError(f"unknown profile kind {kind!r}")
    if profile.lam > r_max:
        raise DomainError(f"lambda {profile.lam!r} exceeds r_max {r_max!r}")
    if model is not None and profile.dimension() not in (None, model.n):
        raise DomainError("profile dimension does not match model dimension")
    return profile


@dataclass(frozen=True)
class NormsReport:
    sup_norm: float
    l1_norm: float
    grad_lp_norm: float
    support_measure: float
    q1: float
    q2: float

    def as_dict(self):
        return {
            "grad_lp_norm": self.grad_lp_norm,
            "l1_norm": self.l1_norm,
            "q1": self.q1,
            "q2": self.q2,
            "sup_norm": self.sup_norm,
            "support_measure": self.support_measure,
        }


def _piecewise_integral(u, integrand, exponents, quad):
    pts = u.breakpoints()
    left, right = exponents
    total = 0.0
    last = len(pts) - 2
    for i, (a, b) in enumerate(zip(pts, pts[1:])):
        spec = quad.with_exponents(left if i == 0 else 0.0, right if i == last else 0.0)
        total += integrate(integrand, a, b, spec)
    return total


def _lp_gradient_pth_power(u, m, e, quad):
    if isinstance(u, Constant):
        return 0.0
    if isinstance(u, PiecewiseLinear):
        vols = [ball_volume(m, k) for k in u.knots]
        return math.fsum(abs(s) ** e.p * (v1 - v0) for s, v0, v1 in zip(u.slopes, vols, vols[1:]))
    area = m.n * omega(m.n)
    n1 = m.n - 1

    def integrand(r):
        return abs(u.derivative(r)) ** e.p * area * m.warp(r) ** n1

    return _piecewise_integral(u, integrand, u.gradient_exponents(), quad)


def _l1(u, m, quad):
    if isinstance(u, Constant):
        return u.level * total_volume(m)
    area = m.n * omega(m.n)
    n1 = m.n - 1

    def integrand(r):
        return u.value(r) * area * m.warp(r) ** n1

    return _piecewise_integral(u, integrand, u.value_exponents(), quad)


def norms_report(u, m, e, quad=None):
    """Sup, L^1, gradient-L^p norms, support measure and both quotients of ``u`` on ``m``."""
    if u.lam > m.r_max:
        raise DomainError(f"profile support {u.lam!r} exceeds r_max {m.r_max!r}")
    if e.n != m.n or u.dimension() not in (None, m.n):
        raise DomainError("dimension mismatch between profile, exponents and model")
    if isinstance(u, Constant) and u.lam != m.r_max:
        raise DomainError("constant profiles must cover the whole compact model")
    quad = quad or NORM_QUADRATURE
    sup = u.sup_norm()
    l1 = _l1(u, m, quad)
    grad = _lp_gradient_pth_power(u, m, e, quad) ** (1.0 / e.p)
    support = u.support_measure(m)
    if sup > 0.0:
        q1 = support ** (1.0 / m.n - 1.0 / e.p) * grad / sup
        q2 = l1 ** (1.0 - e.eta) * grad**e.eta / sup
    else:
        q1 = q2 = math.inf
    return NormsReport(sup_norm=sup, l1_norm=l1, grad_lp_norm=grad,
                       support_measure=support, q1=q1, q2=q2)


def quotient(u, m, e, which="q1", quad=None):
    """The support-bound (``q1``) or L^1-bound (``q2``) quotient of ``u`` on ``m``."""
    if which not in ("q1", "q2"):
        raise DomainError(f"which must be 'q1' or 'q2', got {which!r}")
    return getattr(norms_report(u, m, e, quad), which)
