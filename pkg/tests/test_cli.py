import numpy as np
import pandas as pd
import pytest

from bmforge.cli import RunConfig, build_parser, main
from bmforge.cli.io import read_profile, read_report, read_units, write_profile
from bmforge.domain.models import SampledFunction, Units
from bmforge.errors import ParseError
from bmforge.weights.profile import load_profile_file

CONSTRUCT = ["construct", "--weight", "exp_sqrt", "--dim", "3", "--sigma", "0.05", "--grid-points", "16384"]


def _construct(tmp_path, *extra):
    out = tmp_path / "construct"
    code = main(CONSTRUCT + ["--out", str(out), *extra])
    return code, out


def test_parser_requires_known_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])


def test_no_command_is_a_parse_error(capsys):
    assert main([]) == ParseError.exit_code


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="construct", grid_points=1000)
    with pytest.raises(ValueError):
        RunConfig(command="construct", sigma=0.0)
    assert RunConfig(command="construct", sigma=1.0, units=Units.ANGULAR).sigma_cyclic == pytest.approx(1.0 / (2.0 * np.pi))


def test_calibrate(tmp_path, capsys):
    assert main(["calibrate", "--out", str(tmp_path)]) == 0
    report = read_report(tmp_path / "sonine_constants.txt")
    assert float(report["sonine.d02.constant"]) == pytest.approx(np.sqrt(2.0 / np.pi), rel=1e-6)
    assert float(report["sonine.d04.defect"]) < 1e-5
    assert "sonine.d16.constant" in report
    assert "sonine.d02.constant=" in capsys.readouterr().out


def test_construct_writes_outputs(tmp_path, capsys):
    code, out = _construct(tmp_path)
    assert code == 0
    for name in ("profile.csv", "candidate.csv", "spectrum.csv", "spectrum_report.txt"):
        assert (out / name).is_file()
    assert read_units(out / "profile.csv") is Units.CYCLIC
    report = read_report(out / "spectrum_report.txt")
    assert report["majorization_ok"] == "true"
    assert float(report["majorization_ratio"]) <= 1.0 + 1e-9
    assert report["admissibility.verdict"] != "Inadmissible"
    assert "leakage_ratio=" in capsys.readouterr().out

    profile, _ = read_profile(out / "profile.csv")
    assert profile.grid[0] == 0.0
    assert abs(profile.values[0]) > 0.0


def test_construct_is_deterministic(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    assert main(CONSTRUCT + ["--out", str(first)]) == 0
    assert main(CONSTRUCT + ["--out", str(second)]) == 0
    for name in ("profile.csv", "spectrum.csv", "spectrum_report.txt"):
        assert (first / name).read_bytes() == (second / name).read_bytes()

@pytest.mark.parametrize("dim", ["2", "3", "4", "5"])
def test_construct_meets_default_ceiling_in_every_route(tmp_path, dim):
    out = tmp_path / f"d{dim}"
    args = ["construct", "--weight", "exp_sqrt", "--dim", dim, "--sigma", "0.05", "--grid-points", "16384"]
    assert main(args + ["--out", str(out)]) == 0
    report = read_report(out / "spectrum_report.txt")
    assert float(report["spectrum.worst_leakage_ratio"]) <= 1e-4
    assert float(report["spectrum.direct.leakage_ratio"]) <= 1e-4
    other = "oddclosedform" if int(dim) % 2 else "soninedescent"
    assert float(report[f"spectrum.{other}.leakage_ratio"]) <= 1e-4
    assert any(flag.startswith("tapered") for flag in report["candidate.flags"].split(","))


def test_construct_leakage_ceiling(tmp_path):
    code, out = _construct(tmp_path, "--tol-leakage", "0")
    assert code == 3
    assert (out / "spectrum_report.txt").is_file()


@pytest.mark.parametrize("weight", ["power:0.5", "const", "exp"])
def test_construct_rejects_inadmissible(tmp_path, weight):
    args = ["construct", "--weight", weight, "--dim", "3", "--grid-points", "1024", "--out", str(tmp_path)]
    assert main(args) == 2


def test_construct_rejects_unknown_weight(tmp_path):
    assert main(["construct", "--weight", "nonsense", "--out", str(tmp_path)]) == 4


def test_construct_rejects_bad_grid(tmp_path):
    assert main(CONSTRUCT[:-1] + ["1000", "--out", str(tmp_path)]) == 4


def test_config_file(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("weight=exp_sqrt\ndim=3\nsigma=0.05\ngrid_points=16384\n")
    out = tmp_path / "from_file"
    assert main(["--config", str(config), "construct", "--out", str(out)]) == 0
    assert read_report(out / "spectrum_report.txt")["dim"] == "3"


def test_config_file_missing(tmp_path):
    assert main(["--config", str(tmp_path / "absent.env"), "calibrate"]) == 4


def test_transform_gaussian(tmp_path, gaussian_profile):
    source = tmp_path / "gauss.csv"
    write_profile(source, gaussian_profile)
    out = tmp_path / "transform"
    assert main(["transform", str(source), "--dim", "3", "--sigma", "1.5", "--out", str(out)]) == 0
    frame = pd.read_csv(out / "transform.csv", comment="#")
    assert list(frame.columns[:2]) == ["xi", "value_real"]
    assert np.allclose(frame["value_real"], np.exp(-np.pi * frame["xi"] ** 2), atol=1e-8)
    report = read_report(out / "spectrum_report.txt")
    assert report["spectrum.route"] == "Direct"


def test_transform_route_dimension_mismatch(tmp_path, gaussian_profile):
    source = tmp_path / "gauss.csv"
    write_profile(source, gaussian_profile)
    code = main(["transform", str(source), "--dim", "2", "--route", "OddClosedForm", "--out", str(tmp_path)])
    assert code == 1


def test_transform_missing_input(tmp_path):
    assert main(["transform", str(tmp_path / "absent.csv"), "--out", str(tmp_path)]) == 4


def test_verify_round_trip_and_scaled(tmp_path, capsys):
    code, out = _construct(tmp_path)
    assert code == 0
    ratio = float(read_report(out / "spectrum_report.txt")["majorization_ratio"])
    verify = ["--weight", "exp_sqrt", "--dim", "3", "--sigma", "0.05"]

    checked = tmp_path / "verify"
    assert main(["verify", str(out / "profile.csv"), *verify, "--out", str(checked)]) == 0
    report = read_report(checked / "verify_report.txt")
    assert report["check.majorization"] == "pass"
    assert report["check.moments"] == "pass"
    assert report["check.leakage.oddclosedform"] == "pass"
    assert "checks_failed=0" in capsys.readouterr().out

    profile, _ = read_profile(out / "profile.csv")
    scaled = tmp_path / "scaled.csv"
    write_profile(scaled, SampledFunction(grid=profile.grid, values=profile.values * (2.0 / ratio)))
    rejected = tmp_path / "verify_scaled"
    assert main(["verify", str(scaled), *verify, "--out", str(rejected)]) == 1
    assert read_report(rejected / "verify_report.txt")["check.majorization"] == "fail"


def test_majorize_gamma_out_of_range(tmp_path):
    args = ["majorize", "--weight", "exp(−sqrt(abs(x1)))", "--dim", "2", "--gamma", "3", "--out", str(tmp_path)]
    assert main(args) == 5


def test_majorize_divergent_chain(tmp_path):
    args = ["majorize", "--weight", "exp(−norm(x))", "--dim", "2", "--gamma", "2", "--j-max", "12", "--out", str(tmp_path)]
    assert main(args) == 6


def test_majorize_requires_gamma(tmp_path):
    assert main(["majorize", "--weight", "exp_sqrt", "--dim", "2", "--out", str(tmp_path)]) == 4


def test_majorize_writes_radial_weight(tmp_path, capsys):
    out = tmp_path / "majorize"
    args = [
        "majorize", "--weight", "exp(−sqrt(abs(x1)))", "--dim", "2", "--gamma", "2.5",
        "--j-max", "16", "--out", str(out),
    ]
    assert main(args) == 0
    report = read_report(out / "holder_report.txt")
    assert report["holder.holds"] == "true"
    assert report["holder.divergent"] == "false"
    assert float(report["audit.worst_margin"]) >= 0.0
    assert "holder_lhs_sum=" in capsys.readouterr().out

    phi = load_profile_file(out / "omega_rad.csv")
    assert phi.grid[0] == 0.0
    assert np.all(phi.log_values >= 0.0)


def test_majorize_continues_into_construct(tmp_path):
    out = tmp_path / "chained"
    args = [
        "majorize", "--weight", "exp(−sqrt(abs(x1)))", "--dim", "2", "--gamma", "2.5", "--j-max", "16",
        "--sigma", "0.05", "--grid-points", "16384", "--continue", "--out", str(out),
    ]
    assert main(args) == 0
    assert (out / "holder_report.txt").is_file()
    report = read_report(out / "spectrum_report.txt")
    assert report["majorization_ok"] == "true"
    assert report["dim"] == "2"
