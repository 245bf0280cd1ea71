import math

import pytest

from morrey_sobolev.constants import c1, c2, make_exponents
from morrey_sobolev.exceptions import ConvergenceError, DomainError
from morrey_sobolev.manifolds import ball_volume, make_model
from morrey_sobolev.profiles import norms_report
from morrey_sobolev.variational import (
    Attainment,
    _classify,
    discrete_optimize,
    exact_radial_minimum,
    richardson_limit,
    sharpness_scan,
    volume_bound_diagnostics,
)

E24 = make_exponents(2, 4)
EUCLID2 = make_model("euclidean", 2)
H2 = make_model("hyperbolic", 2, kappa=1.0)
S2 = make_model("sphere", 2, kappa=1.0)


def test_exact_minimum_euclidean_closed_form():
    # I = int_0^lam r^(-1/3) dr = 1.5 lam^(2/3); energy = (2 pi)^(1/4) I^(-3/4)
    for lam in (0.5, 1.0, 2.0):
        res = exact_radial_minimum(EUCLID2, E24, lam)
        assert res.weight_integral == pytest.approx(1.5 * lam ** (2 / 3), rel=1e-12)
        assert res.energy == pytest.approx((2 * math.pi) ** 0.25 * (1.5 * lam ** (2 / 3)) ** -0.75, rel=1e-12)


@pytest.mark.parametrize("m", [EUCLID2, H2, S2])
def test_minimizer_realizes_the_minimum(m):
    res = exact_radial_minimum(m, E24, 1.0)
    u = res.minimizer
    assert u.sup_norm() == pytest.approx(1.0, abs=1e-14)
    assert u.value(1.0) == 0.0
    rep = norms_report(u, m, E24)
    assert rep.grad_lp_norm == pytest.approx(res.energy, rel=1e-9)
    assert rep.q1 == pytest.approx(res.q1_min, rel=1e-9)


def test_minimum_ordering_by_curvature():
    qs = [exact_radial_minimum(m, E24, 1.0).q1_min for m in (S2, EUCLID2, H2)]
    assert qs[0] < qs[1] < qs[2]


@pytest.mark.parametrize("m", [EUCLID2, H2, S2])
def test_discrete_upper_bound_and_convergence(m):
    exact = exact_radial_minimum(m, E24, 1.0).energy
    energies = [discrete_optimize(m, E24, 1.0, N).energy for N in (8, 64, 512)]
    assert all(b < a for a, b in zip(energies, energies[1:]))
    assert all(x >= exact * (1 - 1e-12) for x in energies)
    assert energies[-1] == pytest.approx(exact, rel=1e-4)


def test_discrete_reports_non_convergence():
    with pytest.raises(ConvergenceError) as info:
        discrete_optimize(H2, E24, 1.0, 200, max_iter=1)
    assert info.value.best is not None


def test_discrete_domain():
    with pytest.raises(DomainError):
        discrete_optimize(S2, E24, 4.0, 10)
    with pytest.raises(DomainError):
        discrete_optimize(H2, E24, 1.0, 0)


def test_richardson_exact_on_quadratics():
    f = lambda x: 3.0 - 2.0 * x**2 + 0.5 * x**4  # noqa: E731
    xs = [0.1, 0.2, 0.4]
    assert richardson_limit(xs, [f(x) for x in xs]) == pytest.approx(3.0, abs=1e-13)


def test_classify():
    assert _classify([0.0, 1e-9]) is Attainment.ATTAINED_EVERYWHERE
    assert _classify([1e-3, 1e-2]) is Attainment.NOT_ATTAINED
    assert _classify([0.0, 1e-2]) is Attainment.INDETERMINATE
    assert _classify([math.nan]) is Attainment.INDETERMINATE


def test_scan_hyperbolic():
    res = sharpness_scan(H2, E24, [0.25, 0.5, 1.0, 2.0, 4.0])
    m = res.margins
    assert all(d > 0 for d in m) and all(b > a for a, b in zip(m, m[1:]))
    assert res.attainment is Attainment.NOT_ATTAINED
    assert res.certified and res.asymptotic_volume_ratio > 1.0


def test_scan_small_lambda_limit():
    res = sharpness_scan(H2, E24, [0.02, 0.04, 0.08])
    assert res.limit_estimate == pytest.approx(1.0 / c1(E24), abs=1e-9)


def test_scan_sphere_below_sharp():
    res = sharpness_scan(S2, E24, [0.5, 1.0, 2.0])
    assert all(d < 0 for d in res.margins)


def test_scan_q2_uncertified():
    res = sharpness_scan(EUCLID2, E24, [0.5, 1.0, 2.0], which="q2")
    assert not res.certified
    assert res.attainment is Attainment.ATTAINED_EVERYWHERE
    assert res.sharp_reference == pytest.approx(1.0 / c2(E24), rel=1e-15)


def test_scan_grid_checks():
    with pytest.raises(DomainError):
        sharpness_scan(H2, E24, [1.0, 0.5, 2.0])
    with pytest.raises(DomainError):
        sharpness_scan(S2, E24, [1.0, 4.0])


def test_ms1_factor_and_margins():
    rep = volume_bound_diagnostics(S2, E24, 2 * c1(E24), "ms1", [1.0, 2.0, 3.0])
    assert rep.factor == pytest.approx(0.5**4, rel=1e-14)
    assert rep.margins[2] == pytest.approx(ball_volume(S2, 3.0) - 0.5**4 * math.pi * 9, rel=1e-13)
    rep = volume_bound_diagnostics(S2, E24, c1(E24), "ms1", [1.0, 2.0, 3.0])
    assert rep.factor == pytest.approx(1.0, rel=1e-14) and rep.worst_margin < 0


def test_ms2_gap_zero_on_euclidean():
    rep = volume_bound_diagnostics(EUCLID2, E24, c2(E24), "ms2", [1.0], lam=[0.5, 1.0, 2.0])
    assert rep.factor == pytest.approx(1.0, rel=1e-14)
    assert all(abs(g) < 1e-9 for g in rep.gap_integrals)


def test_ms2_gap_negative_on_sphere():
    rep = volume_bound_diagnostics(S2, E24, c2(E24), "ms2", [1.0], lam=2.0)
    assert rep.gap_integrals[0] < 0


@pytest.mark.parametrize("args", [
    dict(C=0.0, which="ms1", rho_grid=[1.0]),
    dict(C=1.0, which="ms3", rho_grid=[1.0]),
    dict(C=1.0, which="ms1", rho_grid=[4.0]),
    dict(C=1.0, which="ms1", rho_grid=[]),
])
def test_diagnostics_domain(args):
    with pytest.raises(DomainError):
        volume_bound_diagnostics(S2, E24, **args)
