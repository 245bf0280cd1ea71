"""Exponent bundles and the sharp Euclidean Morrey-Sobolev constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import ConsistencyError, DomainError
from .specfun import beta

__all__ = [
    "Exponents",
    "SharpConstants",
    "c1",
    "c2",
    "c2_formula",
    "c2_from_extremal_norms",
    "make_exponents",
    "omega",
    "sharp_constants",
]

C2_CONSISTENCY_RTOL = 1e-6


def omega(n):
    """Volume of the Euclidean unit ball in R^n."""
    if int(n) != n or n < 1:
        raise DomainError(f"omega requires an integer n >= 1, got {n!r}")
    n = int(n)
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


@dataclass(frozen=True)
class Exponents:
    """Dimension ``n`` and integrability exponent ``p > n``.

    ``p_conj`` is the conjugate exponent p/(p-1) and ``eta`` the interpolation
    exponent np/(np + p - n) of the L^1-bound inequality.
    """

    n: int
    p: float
    p_conj: float
    eta: float

    @property
    def morrey_exponent(self):
        """(p - n)/(p - 1), the power in the support-bound extremal."""
        return (self.p - self.n) / (self.p - 1.0)

    @property
    def talenti_a(self):
        """First beta argument (1 - n) p'/n + 1 shared by the L^1-bound formulas."""
        return (1.0 - self.n) * self.p_conj / self.n + 1.0


def make_exponents(n, p):
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    p = float(p)
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    if not (p > n) or math.isinf(p):
        raise DomainError(f"need finite p > n, got n={n}, p={p!r}")
    p_conj = p / (p - 1.0)
    eta = n * p / (n * p + p - n)
    return Exponents(n=n, p=p, p_conj=p_conj, eta=eta)


def c1(e):
    """Sharp constant of the support-bound inequality."""
    n, p = e.n, e.p
    return n ** (-1.0 / p) * omega(n) ** (-1.0 / n) * ((p - 1.0) / (p - n)) ** (1.0 / e.p_conj)


def c2_formula(e):
    """The closed-form L^1-bound constant, exponent applied to (1/n - 1/p) only.

    The alternative reading that raises the product (1/n + 1/p')(1/n - 1/p)
    disagrees with the extremal quotient by 9-70% and is not used.
    """
    n, p, q = e.n, e.p, e.p_conj
    w = omega(n)
    return (
        (n * w ** (1.0 / n)) ** (-n * q / (n + q))
        * (1.0 / n + 1.0 / q)
        * (1.0 / n - 1.0 / p) ** (((n - 1) * q - n) / (n + q))
        * beta(e.talenti_a, q + 1.0) ** (n / (n + q))
    )


def c2_from_extremal_norms(e, lam=1.0):
    """sup / (L1^(1-eta) * grad^eta) of the Euclidean extremal, via beta values."""
    n, p, q = e.n, e.p, e.p_conj
    w = omega(n)
    a = e.talenti_a
    sup = lam**q / n * beta(a, q)
    l1 = lam ** (n + q) * w / n * beta(a + 1.0, q)
    grad = lam ** ((n + q) / p) * w ** (1.0 / p) * beta(a, q + 1.0) ** (1.0 / p)
    return sup / (l1 ** (1.0 - e.eta) * grad**e.eta)


def c2(e):
    """Sharp constant of the L^1-bound inequality.

    Defined as the quotient of the Euclidean extremal; the closed form is
    evaluated alongside and a :class:`ConsistencyError` is raised if the two
    drift apart by more than ``C2_CONSISTENCY_RTOL``.
    """
    operational = c2_from_extremal_norms(e)
    printed = c2_formula(e)
    if abs(printed - operational) > C2_CONSISTENCY_RTOL * operational:
        raise ConsistencyError(
            f"C2 closed form {printed!r} disagrees with extremal quotient {operational!r} "
            f"for n={e.n}, p={e.p}"
        )
    return operational


@dataclass(frozen=True)
class SharpConstants:
    c1: float
    c2: float
    omega_n: float


def sharp_constants(e):
    return SharpConstants(c1=c1(e), c2=c2(e), omega_n=omega(e.n))
