import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morrey_sobolev.exceptions import DomainError, QuadratureError
from morrey_sobolev.specfun import (
    QuadratureSpec,
    beta,
    integrate,
    integrate_with_error,
    ln_gamma,
    quadrature_stats,
    reg_inc_beta,
)

# 30-digit reference values computed once with mpmath
I_03_THIRD_FOUR_THIRDS = 0.737681342761285940132284970014
HALF_BETA_THIRD_FOUR_THIRDS = 1.32497906271408746798526712474


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (4.0, math.log(6.0)), (0.5, 0.5 * math.log(math.pi))])
def test_ln_gamma_special_values(x, expected):
    assert ln_gamma(x) == pytest.approx(expected, abs=1e-15)


def test_ln_gamma_matches_stdlib_on_range():
    for x in np.linspace(0.1, 100.0, 3001):
        ref = math.lgamma(x)
        assert abs(ln_gamma(x) - ref) <= max(1e-13 * abs(ref), 2e-15), x


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, float("nan")])
def test_ln_gamma_domain(x):
    with pytest.raises(DomainError):
        ln_gamma(x)


@pytest.mark.parametrize("a, b, expected", [(1, 1, 1.0), (2, 3, 1.0 / 12.0), (0.5, 0.5, math.pi)])
def test_beta_values(a, b, expected):
    assert beta(a, b) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("a, b", [(0, 1), (1, -2), (-1, -1)])
def test_beta_domain(a, b):
    with pytest.raises(DomainError):
        beta(a, b)


pos = st.floats(min_value=0.05, max_value=30.0)


@given(pos, pos)
def test_beta_symmetric(a, b):
    assert beta(a, b) == pytest.approx(beta(b, a), rel=1e-14)


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("b", [0.4, 1.0, 3.0])
def test_beta_against_quadrature(a, b):
    # fold at 1/2 so each singularity sits at the origin, where floats resolve it
    def half(u, v):
        spec = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_refinements=400, left_exponent=min(u - 1.0, 0.0))
        return integrate(lambda t: t ** (u - 1.0) * (1.0 - t) ** (v - 1.0), 0.0, 0.5, spec)

    assert beta(a, b) == pytest.approx(half(a, b) + half(b, a), rel=1e-11)


def test_reg_inc_beta_endpoints():
    assert reg_inc_beta(0.0, 2.0, 3.0) == 0.0
    assert reg_inc_beta(1.0, 2.0, 3.0) == 1.0


def test_reg_inc_beta_frozen_value_and_quadrature_oracle():
    a, b = 1.0 / 3.0, 4.0 / 3.0
    spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-13, max_refinements=400, left_exponent=a - 1.0)
    direct = integrate(lambda t: t ** (a - 1.0) * (1.0 - t) ** (b - 1.0), 0.0, 0.3, spec) / beta(a, b)
    value = reg_inc_beta(0.3, a, b)
    assert value == pytest.approx(direct, abs=1e-9)
    assert value == pytest.approx(I_03_THIRD_FOUR_THIRDS, abs=1e-13)


@settings(max_examples=200)
@given(st.floats(min_value=0.0, max_value=1.0), pos, pos)
def test_reg_inc_beta_reflection(x, a, b):
    y = 1.0 - x
    x = 1.0 - y  # make x + y == 1 exactly; the function is steep near the ends
    assert reg_inc_beta(x, a, b) + reg_inc_beta(y, b, a) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), pos, pos)
def test_reg_inc_beta_monotone(x, y, a, b):
    lo, hi = min(x, y), max(x, y)
    assert reg_inc_beta(lo, a, b) <= reg_inc_beta(hi, a, b) + 1e-15


@pytest.mark.parametrize("args", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -1)])
def test_reg_inc_beta_domain(args):
    with pytest.raises(DomainError):
        reg_inc_beta(*args)


def test_integrate_inverse_sqrt():
    assert integrate(lambda r: r**-0.5, 0.0, 1.0, QuadratureSpec(left_exponent=-0.5)) == pytest.approx(2.0, abs=1e-10)


def test_integrate_sine():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)


def test_integrate_against_substituted_midpoint_oracle():
    # Plain midpoint on 1e6 panels is only ~2.5e-5 accurate here because of the
    # r**(-1/3) cusp; the same rule after r = t**3 is accurate to ~3e-9.
    n = 10**6
    t = (np.arange(n) + 0.5) / n
    oracle = float(np.mean(3.0 * t * (1.0 - t**6) ** (1.0 / 3.0)))
    spec = QuadratureSpec(left_exponent=-1.0 / 3.0, right_exponent=1.0 / 3.0)
    value = integrate(lambda r: r ** (-1.0 / 3.0) * (1.0 - r * r) ** (1.0 / 3.0), 0.0, 1.0, spec)
    assert value == pytest.approx(oracle, abs=1e-8)
    assert value == pytest.approx(HALF_BETA_THIRD_FOUR_THIRDS, abs=1e-8)


def test_integrate_both_endpoints_singular():
    spec = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-9, max_refinements=200,
                          left_exponent=-0.5, right_exponent=-0.5)
    # the right end is only resolved to float spacing, so ask for less there
    value = integrate(lambda t: (t * (1.0 - t)) ** -0.5, 0.0, 1.0, spec)
    assert value == pytest.approx(math.pi, rel=1e-9)
    tight = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-13, max_refinements=200, left_exponent=-0.5)
    folded = 2.0 * integrate(lambda t: (t * (1.0 - t)) ** -0.5, 0.0, 0.5, tight)
    assert folded == pytest.approx(math.pi, rel=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=30)
def test_integrate_linear(alpha, beta_):
    spec = QuadratureSpec(left_exponent=-0.5)
    f = lambda r: r**-0.5  # noqa: E731
    g = lambda r: math.cos(3 * r)  # noqa: E731
    combo, err = integrate_with_error(lambda r: alpha * f(r) + beta_ * g(r), 0.0, 1.0, spec)
    sep = alpha * integrate(f, 0.0, 1.0, spec) + beta_ * integrate(g, 0.0, 1.0, spec)
    tol = (abs(alpha) + abs(beta_) + 1.0) * (spec.abs_tol + spec.rel_tol * 3.0)
    assert combo == pytest.approx(sep, abs=tol)


def test_integrate_deterministic():
    f = lambda r: r ** (-0.7) * math.exp(-r)  # noqa: E731
    spec = QuadratureSpec(left_exponent=-0.7)
    assert integrate(f, 0.0, 2.0, spec) == integrate(f, 0.0, 2.0, spec)


def test_integrate_reports_nonconvergence():
    spec = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-300, max_refinements=5)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda r: math.sqrt(r) * math.exp(r), 0.0, 1.0, spec)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0.0
    assert info.value.estimate == pytest.approx(integrate(lambda r: math.sqrt(r) * math.exp(r), 0.0, 1.0), rel=1e-6)


def test_integrate_rejects_empty_interval():
    with pytest.raises(DomainError):
        integrate(math.sin, 1.0, 1.0)


@pytest.mark.parametrize("kwargs", [dict(abs_tol=0.0), dict(rel_tol=-1.0), dict(left_exponent=-1.0),
                                    dict(right_exponent=-2.0)])
def test_quadrature_spec_invariants(kwargs):
    with pytest.raises(DomainError):
        QuadratureSpec(**kwargs)


def test_quadrature_stats_collects():
    with quadrature_stats() as stats:
        integrate(math.sin, 0.0, 1.0)
        integrate(math.cos, 0.0, 1.0)
    assert stats.calls == 2
    assert stats.evaluations >= 30
