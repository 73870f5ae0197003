import numpy as np
import pytest
from scipy.integrate import trapezoid

from bmforge.domain.models import SampledFunction, Symmetry
from bmforge.errors import CandidateVanished, InvalidSamples, LeakageTooHigh, NotAdmissible, ZeroDetectionFailed
from bmforge.onedim import (
    build_generator,
    construct_bandlimited_1d,
    cosine_transform,
    deflate_origin_zero,
    even_factor_check,
    fourier_1d,
    generator_of,
    generator_profile,
    leakage_1d,
    make_candidate,
    periodic_grid,
    plateau_radius,
    project_band,
    symmetrize,
    taper_window,
    zero_order,
)
from bmforge.onedim.spectral import origin_index, reflect
from bmforge.weights import even_extend, preset_profile

SIGMA = 0.05
POINTS = 16384
EXTENT = 1600.0


@pytest.fixture(scope="module")
def exp_sqrt():
    return preset_profile("exp_sqrt")


@pytest.fixture(scope="module")
def candidate(exp_sqrt):
    return construct_bandlimited_1d(
        even_extend(exp_sqrt), SIGMA, profile=exp_sqrt, grid_points=POINTS, extent=EXTENT
    )


def _synthetic_zero(order, n=1024, extent=50.0):
    """(e^{2 pi i x/L} - 1)^order (1 + e^{2 pi i x/L}/2), normalized, with a flat weight."""
    x = periodic_grid(n, extent)
    period = 2.0 * extent
    e = np.exp(2j * np.pi * x / period)
    values = (e - 1.0) ** order * (1.0 + 0.5 * e)
    values = values / np.max(np.abs(values))
    band = (0.0, (order + 2) / period)
    return make_candidate(values, x, band[1], band, np.ones(n))


def test_periodic_grid():
    x = periodic_grid(8, 2.0)
    assert x[0] == -2.0
    assert x[origin_index(8)] == 0.0
    assert np.allclose(np.diff(x), 0.5)
    with pytest.raises(InvalidSamples):
        periodic_grid(6, 1.0)


def test_reflect_is_involution():
    values = np.arange(16.0)
    assert np.array_equal(reflect(reflect(values)), values)
    assert reflect(values)[origin_index(16)] == values[origin_index(16)]


def test_projection_removes_leakage():
    rng = np.random.default_rng(3)
    values = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    band = (0.0, 0.1)
    assert leakage_1d(values, 100.0, band) > 0.5
    assert leakage_1d(project_band(values, 100.0, band), 100.0, band) < 1e-20


def test_construction_majorized_and_bandlimited(candidate):
    assert candidate.band == (0.0, SIGMA)
    assert candidate.majorization_ratio <= 1.0 + 1e-9
    assert candidate.leakage <= 1e-12
    assert candidate.l2_norm > 0.0
    assert abs(candidate.origin_value) > 0.0
    assert "bernstein_violated" not in candidate.flags


def test_construction_rejects_inadmissible():
    phi = preset_profile("exp")
    with pytest.raises(NotAdmissible):
        construct_bandlimited_1d(even_extend(phi), SIGMA, profile=phi, grid_points=256, extent=50.0)


def test_leakage_ceiling(exp_sqrt):
    with pytest.raises(LeakageTooHigh):
        construct_bandlimited_1d(
            even_extend(exp_sqrt), SIGMA, profile=exp_sqrt, grid_points=1024, extent=EXTENT,
            projection_steps=0, leakage_ceiling=0.0,
        )


def test_symmetrize_is_even(candidate):
    sym = symmetrize(candidate)
    assert np.array_equal(reflect(sym.samples.values), sym.samples.values)
    assert sym.band == (-SIGMA, SIGMA)
    assert sym.majorization_ratio <= 2.0 + 1e-9


def test_symmetrize_odd_input_flagged():
    x = periodic_grid(256, 10.0)
    odd = make_candidate(np.sin(2.0 * np.pi * x / 20.0), x, 0.1, (-0.1, 0.1), np.ones(256))
    assert "symmetrization_annihilated" in symmetrize(odd).flags


def test_even_factor_identity(candidate):
    sym = symmetrize(candidate)
    assert even_factor_check(sym, np.linspace(0.0, 0.1, 11)) < 1e-8


def test_cosine_transform_of_gaussian():
    r = np.linspace(0.0, 20.0, 4001)
    g = SampledFunction(grid=r, values=np.exp(-r ** 2))
    y = np.array([0.0, 0.5, 1.0, 3.0])
    out = cosine_transform(g, y)
    assert np.allclose(out.values, 0.5 * np.sqrt(np.pi) * np.exp(-y ** 2 / 4.0), atol=1e-5)


def test_fourier_1d_of_even_gaussian():
    r = np.linspace(0.0, 6.0, 1201)
    f = SampledFunction(grid=r, values=np.exp(-np.pi * r ** 2), symmetry=Symmetry.EVEN)
    t = np.array([0.0, 0.5, 1.0])
    assert np.allclose(fourier_1d(f, t), np.exp(-np.pi * t ** 2), atol=1e-5)


def test_cosine_transform_vanishes_beyond_band(candidate):
    g = generator_of(symmetrize(candidate))
    y = 2.0 * np.pi * SIGMA * np.linspace(1.25, 5.0, 20)
    scale = float(trapezoid(np.abs(g.values), g.grid))
    assert np.max(np.abs(cosine_transform(g, y).values)) <= 1e-8 * scale


@pytest.mark.parametrize("order", [1, 2, 3])
def test_zero_order_detection(order):
    assert zero_order(_synthetic_zero(order)) == order


def test_zero_order_fails_on_zero():
    x = periodic_grid(64, 10.0)
    with pytest.raises(ZeroDetectionFailed):
        zero_order(make_candidate(np.zeros(64), x, 0.1, (0.0, 0.1), np.ones(64)))


@pytest.mark.parametrize("order", [1, 2, 3])
def test_deflation_restores_origin(order):
    f = _synthetic_zero(order)
    out = deflate_origin_zero(f)
    assert out.zero_order == order
    assert f"deflated:{order}" in out.flags
    assert abs(out.origin_value) == pytest.approx(1.0, abs=1e-9)
    assert out.majorization_ratio <= 1.0 + 1e-9
    assert out.leakage <= 10.0 * f.leakage + 1e-12


def test_plateau_radius_of_flat_weight():
    f = _synthetic_zero(1)
    assert plateau_radius(f) == pytest.approx(50.0 - f.spacing)


def test_generator_majorized(exp_sqrt):
    result = build_generator(exp_sqrt, SIGMA, d=3, grid_points=POINTS, extent=EXTENT)
    g = result.g
    assert g.grid[0] == 0.0
    assert abs(g.values[0]) > 0.0
    assert np.all(np.abs(g.values) <= exp_sqrt.evaluate(g.grid) * (1.0 + 1e-9))
    assert result.lower_bound_constant > 0.0
    assert result.ball_norm > 0.0


def test_generator_profile_matches_build(exp_sqrt):
    g = generator_profile(exp_sqrt, SIGMA, d=3, grid_points=2048, extent=EXTENT)
    expected = build_generator(exp_sqrt, SIGMA, d=3, grid_points=2048, extent=EXTENT).g
    assert np.array_equal(g.grid, expected.grid)
    assert np.array_equal(g.values, expected.values)


def test_taper_window_shape_and_spectrum():
    x = periodic_grid(2 ** 16, 2000.0)
    m = taper_window(x, 0.01, 8)
    assert m[origin_index(x.size)] == 1.0
    assert np.all((m >= 0.0) & (m <= 1.0))
    assert leakage_1d(m, 4000.0, (-0.01, 0.01)) < 1e-12
    with pytest.raises(InvalidSamples):
        taper_window(x, 0.01, 3)


def test_constant_weight_gives_tapered_chirp():
    x = periodic_grid(POINTS, EXTENT)
    f = construct_bandlimited_1d(
        even_extend(preset_profile("const")), SIGMA, grid_points=POINTS, extent=EXTENT
    )
    expected = np.exp(1j * np.pi * SIGMA * x) * taper_window(x, 0.25 * SIGMA, 8)
    assert np.allclose(f.samples.values, expected, atol=1e-12)
    assert f.origin_value == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(f.samples.values)) <= 1.0 + 1e-12
    assert "tapered:0.25" in f.flags
    assert f.leakage <= 1e-12

    plain = construct_bandlimited_1d(
        even_extend(preset_profile("const")), SIGMA, grid_points=POINTS, extent=EXTENT, taper_fraction=0.0
    )
    assert np.allclose(plain.samples.values, np.exp(1j * np.pi * SIGMA * x), atol=1e-12)


def test_untapered_construction_still_majorized(exp_sqrt):
    f = construct_bandlimited_1d(
        even_extend(exp_sqrt), SIGMA, profile=exp_sqrt, grid_points=2048, extent=EXTENT, taper_fraction=0.0
    )
    assert f.majorization_ratio <= 1.0 + 1e-9
    assert not any(flag.startswith("tapered") for flag in f.flags)


def test_taper_fraction_range_checked(exp_sqrt):
    with pytest.raises(InvalidSamples):
        construct_bandlimited_1d(
            even_extend(exp_sqrt), SIGMA, profile=exp_sqrt, grid_points=256, extent=50.0, taper_fraction=0.5
        )


def test_band_below_grid_resolution_vanishes():
    # no FFT line falls inside the inner band
    with pytest.raises(CandidateVanished):
        construct_bandlimited_1d(even_extend(preset_profile("const")), 1e-4, grid_points=1024, extent=200.0)


def _sine_candidate(sigma=0.05, n=1024, extent=50.0):
    x = periodic_grid(n, extent)
    return make_candidate(np.sin(2.0 * np.pi * sigma * x), x, sigma, (-sigma, sigma), np.ones(n))


def test_deflating_sine_divides_by_x():
    f = _sine_candidate()
    out = deflate_origin_zero(f)
    assert out.zero_order == 1
    assert "deflation_case:first" in out.flags
    assert out.origin_value / out.deflation_scale == pytest.approx(2.0 * np.pi * 0.05, rel=1e-9)
    assert abs(out.origin_value) == pytest.approx(1.0, abs=1e-9)
    assert out.majorization_ratio <= 1.0 + 1e-9


def test_deflating_sine_second_case():
    out = deflate_origin_zero(_sine_candidate(), rho=1.0)
    assert "deflation_case:second" in out.flags
    assert out.deflation_scale == pytest.approx(1.0)
    assert out.origin_value == pytest.approx(2.0 * np.pi * 0.05, rel=1e-9)
    assert out.majorization_ratio <= 1.0 + 1e-9


@pytest.mark.parametrize("order", [1, 2])
def test_deflation_with_measurable_leakage(order):
    base = _synthetic_zero(order)
    x = base.samples.grid
    period = base.period
    e = np.exp(2j * np.pi * x / period)
    stray = 1e-3 * (e - 1.0) ** order * np.exp(2j * np.pi * (order + 5) * x / period)
    f = make_candidate(base.samples.values + stray, x, base.sigma, base.band, np.ones(x.size))
    assert f.leakage > 1e-10
    out = deflate_origin_zero(f)
    assert out.zero_order == order
    assert out.leakage <= 10.0 * f.leakage
    assert out.majorization_ratio <= 1.0 + 1e-9
