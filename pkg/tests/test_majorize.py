import numpy as np
import pytest

from bmforge.domain.models import AnnulusDecomposition, Verdict
from bmforge.errors import EvaluationFailed, GammaOutOfRange, HolderChainDiverged, ParseError
from bmforge.majorize import (
    annulus_maxima,
    annulus_points,
    build_radial_majorant,
    compile_expression,
    envelope_nodes,
    holder_constant,
    log_weight_evaluator,
    reduce_nonradial,
    reduce_nonradial_detailed,
    smoothing_slope,
    verify_holder_chain,
)


def sqrt_norm(x):
    return np.sqrt(np.linalg.norm(x, axis=1))


def abs_first(x):
    return np.abs(x[:, 0])


def test_expression_arithmetic():
    f = compile_expression("x1^2 + 2*x2 − 1", 2)
    assert f(np.array([[1.0, 2.0], [3.0, 0.0]])).tolist() == [4.0, 8.0]
    g = compile_expression("3 × norm(x) ÷ 2", 2)
    assert g(np.array([[3.0, 4.0]]))[0] == pytest.approx(7.5)
    assert compile_expression("-x1^2", 1)(np.array([[3.0]]))[0] == -9.0


@pytest.mark.parametrize("source", ["x3 + 1", "foo(x1)", "norm(y)", "x1 +", "(x1", ""])
def test_expression_errors(source):
    with pytest.raises(ParseError):
        compile_expression(source, 2)


def test_log_weight_evaluator():
    omega = log_weight_evaluator("exp(−sqrt(abs(x1)))", 2)
    assert omega(np.array([[4.0, 0.0], [1e10, 5.0]])).tolist() == [2.0, 1e5]
    preset = log_weight_evaluator("exp_sqrt", 3)
    assert preset(np.array([[0.0, 3.0, 4.0]]))[0] == pytest.approx(np.sqrt(6.0) - 1.0)
    plain = log_weight_evaluator("1/(1 + x1^2)", 1)
    assert plain(np.array([[1.0]]))[0] == pytest.approx(np.log(2.0))


def test_log_weight_must_be_positive():
    omega = log_weight_evaluator("x1", 2)
    with pytest.raises(EvaluationFailed):
        omega(np.array([[-1.0, 0.0]]))


def test_annulus_points_stay_in_closure():
    for j in (0, 3):
        points = annulus_points(3, j, 128, seed=1)
        norms = np.linalg.norm(points, axis=1)
        inner = 0.0 if j == 0 else 2.0 ** j
        assert np.all(norms >= inner * (1.0 - 1e-12))
        assert np.all(norms <= 2.0 ** (j + 1) * (1.0 + 1e-12))


def test_zero_log_weight():
    decomp = annulus_maxima(log_weight_evaluator("const", 2), 2, j_max=5, samples=128)
    assert np.array_equal(decomp.lambdas, np.zeros(6))
    report = verify_holder_chain(decomp, gamma=2.0)
    assert report.lhs_sum == 0.0 and report.rhs_sum == 0.0
    assert report.holds
    assert np.all(build_radial_majorant(decomp, r_max=1e4).log_values == 0.0)


def test_sqrt_norm_annulus_bounds():
    decomp = annulus_maxima(sqrt_norm, 2, j_max=8, samples=512)
    exact = 2.0 ** ((np.arange(9) + 1) / 2.0)
    assert np.all(decomp.lambdas >= exact * (1.0 - 1e-12))
    assert np.all(decomp.lambdas <= 2.0 * exact + 2.0)
    assert np.allclose(decomp.sample_maxima, exact, rtol=1e-12)


def test_sqrt_norm_majorant_profile():
    decomp = annulus_maxima(sqrt_norm, 2, j_max=10, samples=512)
    omega1 = build_radial_majorant(decomp, r_max=2.0 ** 11)
    r = np.geomspace(2.0, 2.0 ** 11, 400)
    values = omega1.log_evaluate(r)
    assert np.all(values >= np.sqrt(r) * (1.0 - 1e-12))
    assert np.all(values <= 2.0 * np.sqrt(r) + 2.0)


def test_abs_coordinate_annulus_bounds():
    decomp = annulus_maxima(abs_first, 2, j_max=6, samples=512)
    outer = 2.0 ** (np.arange(7) + 1)
    assert np.all(decomp.lambdas >= outer)
    assert np.all(decomp.lambdas <= 1.5 * outer)
    assert np.all(decomp.local_lipschitz <= 1.0 + 1e-12)


def test_annulus_maxima_deterministic_across_threads():
    serial = annulus_maxima(sqrt_norm, 3, j_max=4, samples=256, seed=7, threads=1)
    pooled = annulus_maxima(sqrt_norm, 3, j_max=4, samples=256, seed=7, threads=3)
    assert np.array_equal(serial.lambdas, pooled.lambdas)
    assert np.array_equal(serial.covering_radii, pooled.covering_radii)


def test_envelope_of_single_annulus():
    decomp = AnnulusDecomposition(d=2, j_max=3, lambdas=[1.0, 0.0, 0.0, 0.0], gamma=2.5)
    radii, values = envelope_nodes(decomp.lambdas)
    assert radii.tolist() == [0.0, 2.0, 4.0, 8.0, 16.0]
    assert values.tolist() == [1.0, 1.0, 0.0, 0.0, 0.0]
    assert smoothing_slope(decomp.lambdas) == 0.5
    omega1 = build_radial_majorant(decomp, r_max=1e3)
    assert np.allclose(omega1.log_evaluate([0.0, 1.0, 2.0, 3.0, 4.0, 100.0]), [1.0, 1.0, 1.0, 0.5, 0.0, 0.0], atol=1e-12)


def test_holder_chain_geometric_fixture():
    j = np.arange(41)
    lambdas = 2.0 ** ((j + 1) / 2.0)
    report = verify_holder_chain(AnnulusDecomposition(d=2, j_max=40, lambdas=lambdas, gamma=2.5))
    assert report.lhs_sum == pytest.approx(2.0 ** 1.5 * (2.0 - 2.0 ** -40), rel=1e-12)
    assert report.rhs_sum == pytest.approx(np.sqrt(2.0) * (1.0 - 2.0 ** -20.5) / (1.0 - 2.0 ** -0.5), rel=1e-12)
    assert report.constant == pytest.approx(holder_constant(2.5 / 3.0, 2))
    assert not report.divergent
    assert report.holds
    assert report.rhs_sum <= report.bound


def test_holder_chain_divergent_fixture():
    j = np.arange(31)
    decomp = AnnulusDecomposition(d=2, j_max=30, lambdas=2.0 ** j * j, gamma=2.0)
    report = verify_holder_chain(decomp)
    assert report.divergent
    assert not report.holds
    assert report.tail_estimate == float("inf")


def test_holder_constant():
    assert holder_constant(1.0, 3) == float("inf")
    assert holder_constant(0.5, 2) == pytest.approx((1.0 / (1.0 - 2.0 ** -0.75)) ** (2.0 / 3.0))


@pytest.mark.parametrize("gamma", [0.0, -1.0, 3.0, 4.5, float("nan")])
def test_gamma_out_of_range(gamma):
    decomp = AnnulusDecomposition(d=2, j_max=1, lambdas=[1.0, 1.0], gamma=gamma)
    with pytest.raises(GammaOutOfRange):
        verify_holder_chain(decomp)


def test_reduce_nonradial_weight():
    result = reduce_nonradial_detailed(
        "exp(−sqrt(abs(x1)))", d=2, gamma=2.5, sigma=0.05, j_max=20, samples=512, audit_samples=4096
    )
    assert result.worst_margin >= 0.0
    assert result.holder.holds
    assert result.admissibility.verdict is not Verdict.INADMISSIBLE
    assert np.all(result.profile.log_values >= 0.0)
    assert result.decomposition.offset == 0.0


def test_reduce_rejects_gamma_before_sampling():
    def explode(x):
        raise AssertionError("weight should not be evaluated")

    with pytest.raises(GammaOutOfRange):
        reduce_nonradial_detailed(explode, d=2, gamma=3.0, sigma=0.05)


def test_reduce_linear_weight_diverges():
    with pytest.raises(HolderChainDiverged):
        reduce_nonradial_detailed("exp(−norm(x))", d=2, gamma=2.0, sigma=0.05, j_max=12, samples=256)


def test_reduce_nonradial_returns_profile():
    kwargs = dict(j_max=12, samples=256, audit_samples=1024)
    profile = reduce_nonradial("exp(−sqrt(abs(x1)))", 2, 2.5, 0.05, **kwargs)
    detailed = reduce_nonradial_detailed("exp(−sqrt(abs(x1)))", 2, 2.5, 0.05, **kwargs)
    assert np.array_equal(profile.log_values, detailed.profile.log_values)
