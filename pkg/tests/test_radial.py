import math

import numpy as np
import pytest
from scipy.integrate import quad

from bmforge.config import get_settings
from bmforge.domain.models import RadialField, SampledFunction, TransformRoute, Units
from bmforge.errors import DimensionNotEven, DimensionNotOdd
from bmforge.onedim import build_generator
from bmforge.quadrature import panel_rule
from bmforge.radial import (
    exp_moment_transform,
    inner_sonine_integral,
    inner_sonine_values,
    moment_integrals,
    moment_scales,
    odd_taylor_terms,
    radial_fourier_direct,
    radial_fourier_odd,
    route_function,
    sonine_descent_transform,
    spectrum_report,
    total_energy,
)
from bmforge.weights import preset_profile

XI = np.array([0.0, 0.5, 1.0, 2.0])


@pytest.mark.parametrize("d", [1, 3, 5])
def test_gaussian_self_reciprocal_odd(gaussian_profile, d):
    field = RadialField(profile=gaussian_profile, d=d)
    expected = np.exp(-np.pi * XI ** 2)
    assert np.allclose(radial_fourier_direct(field, XI).values, expected, atol=1e-8)
    assert np.allclose(radial_fourier_odd(field, XI).values, expected, atol=1e-8)


@pytest.mark.parametrize("d", [2, 4])
def test_gaussian_self_reciprocal_even(gaussian_profile, d):
    field = RadialField(profile=gaussian_profile, d=d)
    assert np.allclose(radial_fourier_direct(field, XI).values, np.exp(-np.pi * XI ** 2), atol=1e-7)


def test_angular_units(gaussian_profile):
    field = RadialField(profile=gaussian_profile, d=3)
    k = 2.0 * np.pi * XI
    angular = radial_fourier_direct(field, k, Units.ANGULAR).values
    assert np.allclose(angular, radial_fourier_direct(field, XI).values, atol=1e-12)


def test_descent_matches_direct(gaussian_profile):
    field = RadialField(profile=gaussian_profile, d=2)
    xi = np.array([0.3, 0.6])
    descent = sonine_descent_transform(field, xi).values
    direct = radial_fourier_direct(field, xi).values
    assert np.allclose(descent, direct, atol=1e-5)


def test_route_dimension_checks():
    with pytest.raises(DimensionNotOdd):
        route_function(TransformRoute.ODD_CLOSED_FORM, 2)
    with pytest.raises(DimensionNotEven):
        route_function(TransformRoute.SONINE_DESCENT, 3)
    assert route_function(TransformRoute.DIRECT, 4) is radial_fourier_direct


def test_moment_integrals_of_gaussian(gaussian_profile):
    # C_0 = int e^{-pi r^2} cos(tau r) dr, S_0 = -dC_0/dtau
    tau = 1.0
    c0, s0, c1, s1 = moment_integrals(gaussian_profile, tau, 3)
    envelope = np.exp(-tau ** 2 / (4.0 * np.pi))
    assert c0 == pytest.approx(0.5 * envelope, abs=1e-5)
    assert s0 == pytest.approx(tau / (4.0 * np.pi) * envelope, abs=1e-5)
    assert np.isfinite(c1) and np.isfinite(s1)
    with pytest.raises(DimensionNotOdd):
        moment_integrals(gaussian_profile, tau, 2)


def test_inner_sonine_values_of_gaussian(gaussian_profile):
    # int r^{3/2} g J_{1/2}(tau r) dr is the 3-dimensional transform scaled by tau^{1/2} (2 pi)^{-3/2}
    tau = np.array([1.0, 3.0])
    expected = np.exp(-tau ** 2 / (4.0 * np.pi)) * np.sqrt(tau) / (2.0 * np.pi) ** 1.5
    assert np.allclose(inner_sonine_values(gaussian_profile, tau, 2), expected, atol=1e-9)
    assert inner_sonine_integral(gaussian_profile, 1.0, 2) == pytest.approx(expected[0], abs=1e-9)
    with pytest.raises(DimensionNotEven):
        inner_sonine_values(gaussian_profile, tau, 3)


def test_spectrum_report_gaussian(gaussian_profile):
    field = RadialField(profile=gaussian_profile, d=3)
    report = spectrum_report(field, 1.5)
    density = lambda x: x ** 2 * np.exp(-2.0 * np.pi * x ** 2)  # noqa: E731
    outside = quad(density, 1.5, np.inf)[0] / quad(density, 0.0, np.inf)[0]
    assert report.leakage_ratio == pytest.approx(outside, abs=1e-6)
    assert report.plancherel_defect < 1e-6
    assert report.total_energy == pytest.approx(total_energy(field))
    assert report.shell_edges[0] == 0.0
    assert report.shell_edges[-1] == pytest.approx(4.5)


def _shell_profile():
    """Inverse transform in R^3 of F(rho) = (rho-2)^2 (3-rho)^2 on 2 <= rho <= 3."""
    r = np.linspace(0.0, 60.0, 6001)
    rho, w = panel_rule(np.linspace(2.0, 3.0, 101), 8)
    F = (rho - 2.0) ** 2 * (3.0 - rho) ** 2
    g = np.empty(r.size)
    g[0] = 4.0 * np.pi * np.sum(w * rho ** 2 * F)
    g[1:] = (2.0 / r[1:]) * (np.sin(2.0 * np.pi * np.outer(r[1:], rho)) @ (w * rho * F))
    return SampledFunction(grid=r, values=g)


def test_shell_spectrum_leaks_outside_unit_ball():
    report = spectrum_report(RadialField(profile=_shell_profile(), d=3), 1.0)
    assert report.leakage_ratio >= 0.99
    assert report.route is TransformRoute.DIRECT


def test_threads_do_not_change_results(monkeypatch, gaussian_profile):
    field = RadialField(profile=gaussian_profile, d=3)
    xi = np.linspace(0.0, 3.0, 300)
    serial = radial_fourier_direct(field, xi).values
    monkeypatch.setenv("BMFORGE_THREADS", "4")
    get_settings.cache_clear()
    pooled = radial_fourier_direct(field, xi).values
    assert np.allclose(pooled, serial, rtol=1e-13, atol=1e-15)


def _bump(r):
    inside = r < 1.0
    out = np.zeros_like(r)
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


FAMILY = {
    "gaussian": (np.linspace(0.0, 40.0, 8001), lambda r: np.exp(-np.pi * r ** 2)),
    "exp": (np.linspace(0.0, 40.0, 8001), lambda r: np.exp(-r)),
    "r_exp": (np.linspace(0.0, 40.0, 8001), lambda r: r * np.exp(-r)),
    "bump": (np.linspace(0.0, 2.0, 401), _bump),
}
FAMILY_XI = np.array([0.5, 1.0, 3.0])


def _closed_form(name, d):
    k = 2.0 * np.pi * FAMILY_XI
    if name == "gaussian":
        return np.exp(-np.pi * FAMILY_XI ** 2)
    if name == "exp":
        return exp_moment_transform(0, k, d)
    if name == "r_exp":
        return exp_moment_transform(1, k, d)
    return None


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("name", sorted(FAMILY))
def test_routes_agree_on_profile_family(name, d):
    grid, fn = FAMILY[name]
    field = RadialField(profile=SampledFunction(grid=grid, values=fn(grid)), d=d)
    scale = abs(radial_fourier_direct(field, [0.0]).values[0])
    direct = radial_fourier_direct(field, FAMILY_XI).values
    if d % 2:
        other = radial_fourier_odd(field, FAMILY_XI).values
    else:
        other = sonine_descent_transform(field, FAMILY_XI).values
    assert np.allclose(other, direct, atol=1e-6 * scale)
    expected = _closed_form(name, d)
    if expected is not None:
        assert np.allclose(direct, expected, atol=1e-6 * scale)
        assert np.allclose(other, expected, atol=1e-6 * scale)


def test_odd_taylor_terms_of_exp():
    r = np.linspace(0.0, 40.0, 8001)
    g1, g3 = odd_taylor_terms(SampledFunction(grid=r, values=np.exp(-r)))
    assert g1 == pytest.approx(-1.0, abs=1e-6)
    assert g3 == pytest.approx(-1.0 / 6.0, abs=1e-3)
    assert odd_taylor_terms(SampledFunction(grid=r + 1.0, values=np.exp(-r))) == (0.0, 0.0)


def test_exp_moment_transform_at_origin():
    # psi^(0) = |S^{d-1}| int r^{m+d-1} e^{-r} dr
    for d, area in [(2, 2.0 * np.pi), (3, 4.0 * np.pi)]:
        assert exp_moment_transform(0, np.array([0.0]), d)[0] == pytest.approx(area * math.factorial(d - 1))
        assert exp_moment_transform(1, np.array([0.0]), d)[0] == pytest.approx(area * math.factorial(d))
        assert exp_moment_transform(3, np.array([0.0]), d)[0] == pytest.approx(area * math.factorial(d + 2))
    with pytest.raises(ValueError):
        exp_moment_transform(2, np.array([1.0]), 3)


def test_gaussian_leakage_is_negligible(gaussian_profile):
    field = RadialField(profile=gaussian_profile, d=3)
    report = spectrum_report(field, 10.0, route=TransformRoute.ODD_CLOSED_FORM)
    assert report.leakage_ratio <= 1e-9


def test_plancherel_on_compact_bump():
    grid, fn = FAMILY["bump"]
    field = RadialField(profile=SampledFunction(grid=grid, values=fn(grid)), d=3)
    report = spectrum_report(field, 2.0, xi_max=12.0, shells=64)
    assert report.plancherel_defect <= 1e-4
    assert report.leakage_ratio > 0.0


SIGMA = 0.05


@pytest.fixture(scope="module")
def pipeline_g():
    return build_generator(preset_profile("exp_sqrt"), SIGMA, d=3, grid_points=16384, extent=1600.0).g


def _moment_ratios(g, taus):
    scales = np.array(moment_scales(g, 3))
    return np.array([np.abs(moment_integrals(g, tau, 3)) / scales for tau in taus])


def test_pipeline_generator_satisfies_moment_conditions(pipeline_g):
    taus = 2.0 * np.pi * SIGMA * np.linspace(1.25, 5.0, 20)
    assert np.max(_moment_ratios(pipeline_g, taus)) <= 1e-6
    assert spectrum_report(RadialField(profile=pipeline_g, d=3), SIGMA).leakage_ratio <= 1e-4


def test_pipeline_generator_mutation_is_caught(pipeline_g):
    r = pipeline_g.grid
    peak = float(np.max(np.abs(pipeline_g.values)))
    mutated = SampledFunction(
        grid=r,
        values=pipeline_g.values + 1e-2 * peak * np.cos(4.0 * np.pi * SIGMA * r) * np.exp(-((r / 50.0) ** 2)),
    )
    taus = 2.0 * np.pi * SIGMA * np.linspace(1.25, 5.0, 20)
    assert np.max(_moment_ratios(mutated, taus)) >= 1e-3
    before = spectrum_report(RadialField(profile=pipeline_g, d=3), SIGMA).leakage_ratio
    after = spectrum_report(RadialField(profile=mutated, d=3), SIGMA).leakage_ratio
    assert after > 1e-5
    assert after > 10.0 * before
