import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from bmforge.bessel import (
    absolutely_convergent,
    bessel_rayleigh,
    calibrate_sonine_constant,
    check_window,
    decay_constant,
    is_descent_pair,
    poisson_eval,
    poisson_values,
    pq_polynomials,
    rayleigh_eval,
    rayleigh_values,
    sonine_integral,
    sonine_raw_integral,
)
from bmforge.domain.models import BesselRoute
from bmforge.errors import (
    ArgumentTooSmall,
    DimensionInvalid,
    DimensionNotOdd,
    DimensionTooLarge,
    OrderOutOfRange,
    ParameterWindowViolated,
)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.5, 3.0])
def test_poisson_matches_scipy(alpha):
    y = np.concatenate([np.linspace(1e-3, 19.5, 60), np.linspace(20.5, 80.0, 60)])
    assert np.allclose(poisson_values(alpha, y), jv(alpha, y), rtol=0, atol=1e-9)


def test_poisson_at_zero():
    assert poisson_values(0.0, [0.0])[0] == pytest.approx(1.0)
    assert poisson_values(1.5, [0.0])[0] == 0.0


def test_poisson_order_range():
    with pytest.raises(OrderOutOfRange):
        poisson_values(-0.5, [1.0])


@settings(max_examples=40, deadline=None)
@given(n=st.integers(min_value=0, max_value=7), y=st.floats(min_value=1e-3, max_value=50.0))
def test_rayleigh_agrees_with_poisson(n, y):
    assert rayleigh_values(n, [y])[0] == pytest.approx(poisson_values(n + 0.5, [y])[0], abs=1e-9)


def test_rayleigh_without_fallback():
    with pytest.raises(ArgumentTooSmall):
        rayleigh_values(2, [1e-4], series_fallback=False)
    with pytest.raises(ArgumentTooSmall):
        bessel_rayleigh(0, 0.0, series_fallback=False)


def test_pq_structure_d3():
    pq = pq_polynomials(3)
    assert pq.p_parity == "zero"
    assert pq.q_parity == "odd"
    assert pq.prefactor == pytest.approx(np.sqrt(2.0 / np.pi))


def test_pq_structure_d5():
    # y^{5/2} J_{3/2}(y) = sqrt(2/pi) (-y^2 cos y + y sin y)
    pq = pq_polynomials(5)
    assert np.allclose(np.trim_zeros(pq.p_coeffs, "b"), [0.0, 0.0, -1.0])
    assert np.allclose(np.trim_zeros(pq.q_coeffs, "b"), [0.0, 1.0])
    assert pq.p_parity == "even"
    assert pq.q_parity == "odd"


@pytest.mark.parametrize("d", [3, 5, 7, 9, 11])
def test_pq_kernel_matches_scipy(d):
    pq = pq_polynomials(d)
    y = np.linspace(0.5, 40.0, 80)
    exact = y ** (0.5 * d) * jv(0.5 * d - 1.0, y)
    assert np.all(np.abs(pq.kernel(y) - exact) <= 1e-10 * pq.term_scale(y) + 1e-12)
    assert pq.audit_error < 1e-10


def test_pq_dimension_errors():
    with pytest.raises(DimensionNotOdd):
        pq_polynomials(4)
    with pytest.raises(DimensionInvalid):
        pq_polynomials(0)
    with pytest.raises(DimensionTooLarge):
        pq_polynomials(17)


def test_decay_constant_j0():
    assert 0.7 < decay_constant(0.0) < 0.85


def test_sonine_constant_for_descent():
    assert calibrate_sonine_constant(0.5, -0.5) == pytest.approx(np.sqrt(2.0 / np.pi), rel=1e-6)


@pytest.mark.parametrize("y, expected", [(1.0, 0.7651976866), (2.0, 0.2238907791), (7.5, 0.2663396579)])
def test_sonine_route_reproduces_j0(y, expected):
    assert sonine_integral(0.5, -0.5, y) == pytest.approx(expected, abs=1e-6)


def test_sonine_window():
    check_window(0.5, 0.3)
    check_window(1.5, -0.5)
    assert is_descent_pair(1.5, -0.5)
    assert not is_descent_pair(0.5, 0.3)
    with pytest.raises(ParameterWindowViolated):
        check_window(1.0, 0.0)
    with pytest.raises(ParameterWindowViolated):
        sonine_integral(0.5, -0.5, 0.0)


def test_absolute_convergence_boundary():
    assert not absolutely_convergent(0.5, -0.5)
    assert absolutely_convergent(2.5, -0.5)
    assert absolutely_convergent(1.5, -0.5)
    assert not absolutely_convergent(1.0, -0.5)


def test_single_evaluations_record_route():
    poisson = poisson_eval(0.5, 2.0)
    assert poisson.route is BesselRoute.POISSON
    assert poisson.value == pytest.approx(jv(0.5, 2.0), abs=1e-10)
    rayleigh = rayleigh_eval(1, 2.0)
    assert rayleigh.order == 1.5
    assert rayleigh.route is BesselRoute.RAYLEIGH
    assert rayleigh.value == pytest.approx(jv(1.5, 2.0), abs=1e-10)


def test_absolutely_convergent_branch_sums_panels():
    raw = sonine_raw_integral(1.5, -0.5, 1.0)
    assert raw.absolutely_convergent
    assert not sonine_raw_integral(0.5, -0.5, 1.0).absolutely_convergent
    assert calibrate_sonine_constant(1.5, -0.5) == pytest.approx(np.sqrt(2.0 / np.pi), rel=1e-6)


@pytest.mark.parametrize("y", [0.7, 2.5, 9.0])
def test_sonine_route_reproduces_j1(y):
    assert sonine_integral(1.5, -0.5, y) == pytest.approx(jv(1.0, y), abs=1e-6)


def test_short_truncation_still_settles_when_absolutely_convergent():
    # the asymptotic tail replaces the panels dropped past R
    assert sonine_integral(1.5, -0.5, 2.0, R=80.0) == pytest.approx(jv(1.0, 2.0), abs=1e-6)
