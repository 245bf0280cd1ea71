import math

import pytest

from morrey_sobolev.constants import (
    c1,
    c2,
    c2_formula,
    c2_from_extremal_norms,
    make_exponents,
    omega,
    sharp_constants,
)
from morrey_sobolev.exceptions import DomainError
from morrey_sobolev.manifolds import make_model, sphere_area
from morrey_sobolev.profiles import TalentiExtremal, norms_report
from morrey_sobolev.variational import exact_radial_minimum

# (n, p) -> (C1, C2), 30-digit mpmath evaluations
FROZEN = {
    (2, 3): (0.710834332443240360806044517762, 0.953638318983411717235801573658),
    (2, 4): (0.643037068578743784641782505665, 0.940666038384577957677780674016),
    (3, 4): (1.07447856873805526298690806357, 1.28402808639701908247348936097),
    (3, 5): (0.867035492367525010250642118308, 1.11705637818992755817502723252),
    (4, 6): (1.14276230027757410716981204706, 1.36612299633217789176285843065),
}


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, math.pi), (3, 4.0 * math.pi / 3.0)])
def test_omega(n, expected):
    assert omega(n) == pytest.approx(expected, rel=1e-15)


def test_omega_domain():
    with pytest.raises(DomainError):
        omega(0)


@pytest.mark.parametrize("n, p, eta", [(2, 4, 0.8), (2, 3, 6 / 7), (3, 4, 12 / 13)])
def test_make_exponents_eta(n, p, eta):
    e = make_exponents(n, p)
    assert e.eta == pytest.approx(eta, rel=1e-15)
    assert e.p_conj == pytest.approx(p / (p - 1), rel=1e-15)
    assert 0 < e.eta < 1


@pytest.mark.parametrize("n, p", [(2, 2), (3, 2.5), (1, 4), (2.5, 4), (2, float("inf"))])
def test_make_exponents_domain(n, p):
    with pytest.raises(DomainError):
        make_exponents(n, p)


@pytest.mark.parametrize("np_", sorted(FROZEN))
def test_c1_c2_frozen(np_):
    e = make_exponents(*np_)
    assert c1(e) == pytest.approx(FROZEN[np_][0], rel=1e-13)
    assert c2(e) == pytest.approx(FROZEN[np_][1], rel=1e-13)


def test_c1_closed_form_n2_p4():
    e = make_exponents(2, 4)
    assert c1(e) == pytest.approx(2**-0.25 * math.pi**-0.5 * 1.5**0.75, rel=1e-15)


def test_c1_matches_power_extremal_large_p():
    from morrey_sobolev.profiles import PowerExtremal, quotient

    e = make_exponents(2, 100)
    q = quotient(PowerExtremal(e, 1.0), make_model("euclidean", 2), e, "q1")
    assert 1.0 / q == pytest.approx(c1(e), rel=1e-8)


def test_c1_diverges_near_n():
    for n in (2, 3, 4):
        near = [c1(make_exponents(n, n + d)) for d in (1e-2, 1e-4, 1e-6, 1e-8)]
        assert all(b > 5 * a for a, b in zip(near, near[1:]))
        assert near[-1] > 1e3 * c1(make_exponents(n, 2 * n))


@pytest.mark.parametrize("n, p", [(2, 3), (2, 4), (3, 5), (4, 6), (2, 50), (5, 7.5)])
def test_c2_formula_grouping_matches_extremal(n, p):
    e = make_exponents(n, p)
    assert c2_formula(e) == pytest.approx(c2_from_extremal_norms(e), rel=1e-12)


@pytest.mark.parametrize("n, p", [(2, 4), (3, 5)])
def test_c2_against_quadrature_of_extremal(n, p):
    e = make_exponents(n, p)
    rep = norms_report(TalentiExtremal(e, 1.0), make_model("euclidean", n), e)
    assert 1.0 / rep.q2 == pytest.approx(c2(e), rel=1e-6)


def test_c2_operational_is_lambda_independent():
    e = make_exponents(2, 4)
    assert c2_from_extremal_norms(e, 0.5) == pytest.approx(c2_from_extremal_norms(e, 2.0), rel=1e-8)
    m = make_model("euclidean", 2)
    qa = norms_report(TalentiExtremal(e, 0.5), m, e).q2
    qb = norms_report(TalentiExtremal(e, 2.0), m, e).q2
    assert qa == pytest.approx(qb, rel=1e-8)


@pytest.mark.parametrize("n, p", [(2, 3), (2, 4), (3, 4), (3, 5), (4, 6)])
@pytest.mark.parametrize("lam", [0.3, 1.0, 3.0])
def test_inverse_c1_is_euclidean_minimum(n, p, lam):
    e = make_exponents(n, p)
    q = exact_radial_minimum(make_model("euclidean", n), e, lam).q1_min
    assert q == pytest.approx(1.0 / c1(e), rel=1e-7)


def test_eta_monotone_in_n_and_limit():
    p = 20.0
    etas = [make_exponents(n, p).eta for n in range(2, 10)]
    assert all(b > a for a, b in zip(etas, etas[1:]))
    for n in (2, 3, 5):
        assert make_exponents(n, 1e6).eta == pytest.approx(n / (n + 1), abs=1e-5)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_omega_times_n_is_unit_sphere_area(n):
    assert sphere_area(make_model("euclidean", n), 1.0) == n * omega(n)


def test_sharp_constants_positive():
    for np_ in FROZEN:
        sc = sharp_constants(make_exponents(*np_))
        assert sc.c1 > 0 and sc.c2 > 0 and sc.omega_n > 0
