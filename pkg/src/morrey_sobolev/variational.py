"""Fixed-support minimisation of the Morrey-Sobolev quotients over radial profiles.

The radial p-energy  E(phi) = n omega_n int_0^lam |phi'|^p psi^(n-1) dr  with
phi(0) = 1, phi(lam) = 0 has the first integral |phi'|^(p-1) psi^(n-1) = const,
which gives the minimiser in closed form up to one quadrature. A convex
piecewise-linear solver serves as an independent check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import c1, c2, omega
from .exceptions import ConvergenceError, DomainError, QuadratureError
from .manifolds import ball_volume
from .profiles import (
    NORM_QUADRATURE,
    PiecewiseLinear,
    RadialProfile,
    TalentiExtremal,
    f_lambda,
    quotient,
)
from .specfun import integrate

__all__ = [
    "ATTAINMENT_TOL",
    "LOWER_BOUND_TOL",
    "Attainment",
    "DiagnosticsReport",
    "DiscreteMinimum",
    "RadialMinimizer",
    "RadialMinimum",
    "ScanResult",
    "discrete_optimize",
    "exact_radial_minimum",
    "richardson_limit",
    "sharpness_scan",
    "volume_bound_diagnostics",
]

# max |q - 1/C| below which a scan counts as attaining the sharp constant
ATTAINMENT_TOL = 1e-6
# slack allowed when checking q >= 1/C on Cartan-Hadamard models
LOWER_BOUND_TOL = 1e-7


def _check_radius(m, lam):
    lam = float(lam)
    if not 0.0 < lam < m.r_max:
        raise DomainError(f"lambda {lam!r} must lie in (0, {m.r_max!r})")
    return lam


class RadialMinimizer(RadialProfile):
    """phi(r) = int_r^lam w / int_0^lam w with w = psi^(-(n-1)/(p-1))."""

    kind = "radial_minimizer"

    def __init__(self, model, exponents, lam, total, quad):
        self.model = model
        self.exponents = exponents
        self.lam = lam
        self.total = total
        self._power = -(model.n - 1.0) / (exponents.p - 1.0)
        self._quad = quad

    def weight(self, r):
        return self.model.warp(r) ** self._power

    def value(self, r):
        if r >= self.lam:
            return 0.0
        if r <= 0.0:
            return 1.0
        spec = self._quad.with_exponents(self._power, 0.0)
        return 1.0 - integrate(self.weight, 0.0, r, spec) / self.total

    def derivative(self, r):
        if r >= self.lam or r <= 0.0:
            return 0.0
        return -self.weight(r) / self.total

    def sup_norm(self):
        return 1.0

    def gradient_exponents(self):
        return self._power, 0.0

    def value_exponents(self):
        return self.model.n - 1.0, 1.0


@dataclass(frozen=True)
class RadialMinimum:
    energy: float
    minimizer: RadialMinimizer
    q1_min: float
    weight_integral: float


def exact_radial_minimum(m, e, lam, quad=None):
    """Minimal ||grad u||_p over radial u with u = 1 at the pole and support radius lam.

    Returns the energy, the minimising profile and the resulting smallest
    support-bound quotient on the ball of radius ``lam``.
    """
    if e.n != m.n:
        raise DomainError("dimension mismatch between exponents and model")
    lam = _check_radius(m, lam)
    quad = quad or NORM_QUADRATURE
    power = -(m.n - 1.0) / (e.p - 1.0)
    spec = quad.with_exponents(power, 0.0)
    total = integrate(lambda r: m.warp(r) ** power, 0.0, lam, spec)
    energy = (m.n * omega(m.n)) ** (1.0 / e.p) * total ** (-1.0 / e.p_conj)
    q1_min = ball_volume(m, lam) ** (1.0 / m.n - 1.0 / e.p) * energy
    return RadialMinimum(energy=energy, minimizer=RadialMinimizer(m, e, lam, total, quad),
                         q1_min=q1_min, weight_integral=total)


@dataclass(frozen=True)
class DiscreteMinimum:
    energy: float
    profile: PiecewiseLinear
    iterations: int
    converged: bool


def discrete_optimize(m, e, lam, N, grading=3.0, max_iter=200, tol=1e-14):
    """Minimise the p-energy over piecewise-linear profiles on ``N`` segments.

    Knots sit at ``lam * (i/N)**grading`` so that the r**((p-n)/(p-1)) cusp at
    the pole is resolved. The unknowns are the segment slopes s_i under the
    single linear constraint sum s_i h_i = -1; per-segment weights
    W_i = Vol(B(r_{i+1})) - Vol(B(r_i)) are exact, so the objective
    sum W_i |s_i|^p is separable and convex. Each step projects the
    diagonally scaled gradient onto the constraint and backtracks.
    """
    if N < 8:
        raise DomainError(f"grid size must be at least 8, got {N!r}")
    if e.n != m.n:
        raise DomainError("dimension mismatch between exponents and model")
    lam = _check_radius(m, lam)
    p = e.p
    knots = lam * (np.arange(N + 1) / N) ** grading
    knots[-1] = lam
    h = np.diff(knots)
    vols = np.array([ball_volume(m, k) for k in knots])
    w = np.diff(vols)

    def objective(s):
        return float(np.sum(w * np.abs(s) ** p))

    s = np.full(N, -1.0 / lam)
    f = objective(s)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        a = np.abs(s)
        g = p * w * a ** (p - 1.0) * np.sign(s)
        hess = p * (p - 1.0) * w * np.maximum(a, 1e-300) ** (p - 2.0)
        dinv = 1.0 / hess
        mu = float(h @ (dinv * g)) / float(h @ (dinv * h))
        d = -dinv * (g - mu * h)
        slope = float(g @ d)
        if -slope <= tol * f:
            converged = True
            break
        t = 1.0
        while True:
            trial = s + t * d
            ft = objective(trial)
            if ft <= f + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-20:
                break
        if t < 1e-20:
            converged = -slope <= 1e-10 * f
            break
        s, f = trial, ft
    values = np.concatenate([[1.0], 1.0 + np.cumsum(s * h)])
    values[-1] = 0.0
    # rounding can leave tiny upward steps near the tail; they are clipped
    values = np.minimum.accumulate(np.maximum(values, 0.0))
    result = DiscreteMinimum(
        energy=f ** (1.0 / p),
        profile=PiecewiseLinear(knots.tolist(), values.tolist()),
        iterations=it,
        converged=converged,
    )
    if not converged:
        raise ConvergenceError(f"discrete optimiser did not converge in {max_iter} iterations",
                               best=result)
    return result


class Attainment(enum.Enum):
    ATTAINED_EVERYWHERE = "AttainedEverywhere"
    NOT_ATTAINED = "NotAttained"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ScanResult:
    which: str
    lambdas: tuple
    q_values: tuple
    sharp_reference: float
    limit_estimate: float
    attainment: Attainment
    asymptotic_volume_ratio: float
    certified: bool
    errors: dict = field(default_factory=dict)

    @property
    def margins(self):
        return tuple(q - self.sharp_reference for q in self.q_values)


def richardson_limit(xs, ys):
    """Extrapolate y(x) -> x = 0 assuming y = L + a x^2 + b x^4 + ...

    Uses the polynomial in x^2 through the given points (three for the scans).
    """
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    # Neville's scheme in the variable x^2, evaluated at 0
    t = [x * x for x in xs]
    table = list(ys)
    k = len(t)
    for level in range(1, k):
        for i in range(k - level):
            j = i + level
            table[i] = (t[j] * table[i] - t[i] * table[i + 1]) / (t[j] - t[i])
    return table[0]


def _classify(margins):
    finite = [d for d in margins if math.isfinite(d)]
    if not finite:
        return Attainment.INDETERMINATE
    if len(finite) == len(margins) and max(abs(d) for d in finite) < ATTAINMENT_TOL:
        return Attainment.ATTAINED_EVERYWHERE
    if len(finite) == len(margins) and min(finite) > ATTAINMENT_TOL:
        return Attainment.NOT_ATTAINED
    return Attainment.INDETERMINATE


def sharpness_scan(m, e, lambdas, which="q1", quad=None):
    """Smallest quotient per support radius, compared with the sharp constant.

    ``q1`` values are exact radial minima. ``q2`` values come from the
    L^1-bound Euclidean extremal transplanted onto ``m``; they bound the true
    minimum from above only, so the result is marked ``certified=False``.
    Grid points whose quadrature fails are kept as NaN with the message in
    ``errors``.
    """
    if which not in ("q1", "q2"):
        raise DomainError(f"which must be 'q1' or 'q2', got {which!r}")
    lams = tuple(_check_radius(m, lam) for lam in lambdas)
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise DomainError("lambda grid must be strictly increasing")
    reference = 1.0 / (c1(e) if which == "q1" else c2(e))
    values = []
    errors = {}
    for lam in lams:
        try:
            if which == "q1":
                values.append(exact_radial_minimum(m, e, lam, quad).q1_min)
            else:
                values.append(quotient(TalentiExtremal(e, lam), m, e, "q2", quad))
        except QuadratureError as exc:
            values.append(math.nan)
            errors[lam] = str(exc)
    if len(lams) >= 3 and all(math.isfinite(v) for v in values[:3]):
        limit = richardson_limit(lams[:3], values[:3])
    else:
        limit = math.nan
    attainment = _classify([q - reference for q in values])
    big = lams[-1]
    ratio = ball_volume(m, big) / (omega(m.n) * big**m.n)
    return ScanResult(
        which=which, lambdas=lams, q_values=tuple(values), sharp_reference=reference,
        limit_estimate=limit, attainment=attainment, asymptotic_volume_ratio=ratio,
        certified=(which == "q1"), errors=errors,
    )


@dataclass(frozen=True)
class DiagnosticsReport:
    """Large-volume-balls margins V(rho) - factor * omega_n rho^n and, for ms2, gap integrals."""

    which: str
    C: float
    factor: float
    radii: tuple
    margins: tuple
    worst_margin: float
    worst_radius: float
    lambdas: tuple = ()
    gap_integrals: tuple = ()

    @property
    def large_volume_balls(self):
        return self.worst_margin >= 0.0


def volume_bound_diagnostics(m, e, C, which, rho_grid, lam=None, quad=None):
    """Consequences of assuming the inequality with constant ``C`` on ``m``.

    ``ms1``: the support-bound inequality forces
    V(rho) >= (C1/C)^(pn/(p-n)) omega_n rho^n. ``ms2``: the L^1-bound one forces
    the same with exponent pn/(p-n) + 1, and on nonnegatively curved models
    the weighted gap  int_0^lam (V(rho) - factor omega_n rho^n) f_lam(rho) drho
    must be non-negative for every ``lam`` (a number or a sequence).
    """
    C = float(C)
    if not C > 0.0 or math.isinf(C):
        raise DomainError(f"C must be a positive finite number, got {C!r}")
    if e.n != m.n:
        raise DomainError("dimension mismatch between exponents and model")
    n, p = e.n, e.p
    if which == "ms1":
        factor = (c1(e) / C) ** (p * n / (p - n))
    elif which == "ms2":
        factor = (c2(e) / C) ** (1.0 / (1.0 - e.eta))
    else:
        raise DomainError(f"which must be 'ms1' or 'ms2', got {which!r}")
    radii = tuple(float(r) for r in rho_grid)
    if not radii:
        raise DomainError("rho grid must contain at least one radius")
    for r in radii:
        if not 0.0 < r < m.r_max:
            raise DomainError(f"radius {r!r} outside (0, {m.r_max!r})")
    w = omega(n)
    margins = tuple(ball_volume(m, r) - factor * w * r**n for r in radii)
    k = min(range(len(margins)), key=margins.__getitem__)
    lams = ()
    gaps = ()
    if which == "ms2" and lam is not None:
        lams = tuple(float(x) for x in (lam if hasattr(lam, "__iter__") else [lam]))
        quad = quad or NORM_QUADRATURE
        spec = quad.with_exponents((1.0 - n) / (p - 1.0), 1.0 / (p - 1.0))
        gap_list = []
        for L in lams:
            L = _check_radius(m, L) if m.is_compact else L
            if not L > 0.0:
                raise DomainError(f"lambda must be positive, got {L!r}")
            gap_list.append(integrate(
                lambda r, L=L: (ball_volume(m, r) - factor * w * r**n) * f_lambda(e, L, r),
                0.0, L, spec,
            ))
        gaps = tuple(gap_list)
    return DiagnosticsReport(
        which=which, C=C, factor=factor, radii=radii, margins=margins,
        worst_margin=margins[k], worst_radius=radii[k], lambdas=lams, gap_integrals=gaps,
    )
