#!/usr/bin/env python3
"""
bmforge Command Line

Subcommands:

    construct   radial weight -> band-limited radial function, spectrum and report
    transform   radial profile CSV -> Fourier transform and shell spectrum
    verify      certify a radial profile CSV against a weight
    majorize    non-radial weight -> radial majorant and Hölder-chain report
    calibrate   print the Sonine constants used by even-dimensional descent

Flags may also come from a flat key=value file given with --config; flags on
the command line win. Diagnostics go to stderr, machine output to stdout and
the output directory.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError, field_validator

from ..bessel import calibrate_sonine_constant
from ..config import get_settings
from ..domain.models import RadialField, SampledFunction, TransformRoute, Units, WeightProfile
from ..errors import BMForgeError, LeakageTooHigh, MajorizationViolated, NotAdmissible, ParseError
from ..majorize import reduce_nonradial_detailed
from ..onedim import build_generator
from ..radial import inner_sonine_values, moment_integrals, moment_scales, radial_weights, route_function, spectrum_report
from ..weights import clamp_weight, graded_grid, load_weight, preset_profile, radial_l2_norm
from .io import profile_frame, read_profile, write_frame, write_profile, write_report, write_spectrum, write_transform

logger = logging.getLogger(__name__)

COMMANDS = ("construct", "transform", "verify", "majorize", "calibrate")
PROFILE_SPACING = 0.05
TRIM_LEVEL = 1e-16
MAJORIZATION_TOL = 1e-9
TRANSFORM_POINTS = 257
MOMENT_TAUS = 20
CALIBRATE_DIMS = range(2, 17, 2)

# descent is costly per frequency; the CLI samples its spectrum more coarsely
DESCENT_OPTIONS = {"half_periods": 40, "panel_nodes": 8}
DESCENT_SHELLS = 16
DESCENT_NODES = 4


class RunConfig(BaseModel):
    """Validated options of one CLI run."""

    command: str
    weight: Optional[str] = None
    dim: int = 1
    sigma: float = 0.05
    gamma: Optional[float] = None
    grid_points: Optional[int] = None
    extent: Optional[float] = None
    grading_ratio: Optional[float] = None
    tol_leakage: Optional[float] = None
    tol_moment: float = 1e-4
    clamp: Optional[float] = None
    units: Units = Units.CYCLIC
    route: TransformRoute = TransformRoute.DIRECT
    out: Path = Path("out")
    seed: int = 0
    j_max: Optional[int] = None
    chain: bool = False
    input: Optional[Path] = None

    @field_validator("command")
    @classmethod
    def known_command(cls, v: str) -> str:
        if v not in COMMANDS:
            raise ValueError(f"unknown subcommand '{v}'")
        return v

    @field_validator("sigma")
    @classmethod
    def positive_sigma(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("sigma must be positive")
        return v

    @field_validator("dim")
    @classmethod
    def positive_dim(cls, v: int) -> int:
        if v < 1:
            raise ValueError("dimension must be >= 1")
        return v

    @field_validator("grid_points")
    @classmethod
    def power_of_two(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and (v < 4 or v & (v - 1)):
            raise ValueError("grid points must be a power of two >= 4")
        return v

    @field_validator("tol_leakage", "tol_moment")
    @classmethod
    def nonnegative_tolerance(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v < 0:
            raise ValueError("tolerances must be >= 0")
        return v

    @property
    def sigma_cyclic(self) -> float:
        return self.sigma / (2.0 * np.pi) if self.units is Units.ANGULAR else self.sigma

    @property
    def leakage_ceiling(self) -> float:
        return get_settings().leakage_ceiling if self.tol_leakage is None else self.tol_leakage


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmforge", description="Band-limited functions under radial weights")
    parser.add_argument("--config", type=Path, help="key=value file with default options")
    parser.add_argument("--log-level", help="logging level (default from settings)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--weight", help="preset name, weight file, or expression over x1..xd")
    common.add_argument("--dim", type=int, help="dimension d")
    common.add_argument("--sigma", type=float, help="spectral radius")
    common.add_argument("--units", choices=[u.value for u in Units], help="frequency units of --sigma and outputs")
    common.add_argument("--grid-points", type=int, help="points of the periodic 1D grid")
    common.add_argument("--extent", type=float, help="half-width of the periodic 1D grid")
    common.add_argument("--grading-ratio", type=float, help="geometric ratio of the weight grid")
    common.add_argument("--tol-leakage", type=float, help="leakage ceiling")
    common.add_argument("--tol-moment", type=float, help="relative moment tolerance for verify")
    common.add_argument("--out", type=Path, help="output directory")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    construct = subparsers.add_parser("construct", parents=[common], help="Construct a band-limited radial function")
    construct.add_argument("--clamp", type=float, metavar="Q", help="replace the weight by min(w, (1+r)^-Q)")

    transform = subparsers.add_parser("transform", parents=[common], help="Transform a radial profile CSV")
    transform.add_argument("input", type=Path, help="profile CSV (r, value_real, value_imag)")
    transform.add_argument("--route", choices=[r.value for r in TransformRoute], help="transform route")

    verify = subparsers.add_parser("verify", parents=[common], help="Certify a radial profile CSV")
    verify.add_argument("input", type=Path, help="profile CSV (r, value_real, value_imag)")

    majorize = subparsers.add_parser("majorize", parents=[common], help="Radial majorant of a non-radial weight")
    majorize.add_argument("--gamma", type=float, help="exponent gamma < d + 1")
    majorize.add_argument("--seed", type=int, help="seed of the annulus sampling")
    majorize.add_argument("--j-max", type=int, help="number of dyadic annuli minus one")
    majorize.add_argument("--continue", dest="chain", action="store_true", default=None,
                          help="run construct on the radial majorant")
    majorize.add_argument("--clamp", type=float, metavar="Q", help="clamp applied before the chained construct")

    subparsers.add_parser("calibrate", parents=[common], help="Print calibrated Sonine constants")
    return parser


def _file_options(path: Optional[Path]) -> Dict[str, str]:
    if path is None:
        return {}
    if not Path(path).is_file():
        raise ParseError(f"config file not found: {path}")
    values = dotenv_values(path)
    return {key.strip().lower().replace("-", "_"): value for key, value in values.items() if value is not None}


def load_config(args: argparse.Namespace) -> RunConfig:
    options: Dict[str, object] = dict(_file_options(args.config))
    for key, value in vars(args).items():
        if key in ("config", "log_level") or value is None:
            continue
        options[key] = value
    try:
        return RunConfig(**options)
    except ValidationError as exc:
        raise ParseError(f"invalid options: {exc}") from exc


def _weight_profile(config: RunConfig) -> WeightProfile:
    if not config.weight:
        raise ParseError("--weight is required")
    if config.grading_ratio is not None and not Path(config.weight).is_file():
        return preset_profile(config.weight, graded_grid(ratio=config.grading_ratio), dimension_hint=config.dim)
    return load_weight(config.weight, dimension_hint=config.dim)


def _coarsen(g: SampledFunction, spacing: float = PROFILE_SPACING) -> SampledFunction:
    """Subsample to about ``spacing`` and drop the trailing samples below TRIM_LEVEL of the peak."""
    stride = max(1, int(round(spacing / g.spacing))) if g.grid.size > 1 else 1
    grid, values = g.grid[::stride], g.values[::stride]
    absval = np.abs(values)
    kept = np.flatnonzero(absval > TRIM_LEVEL * np.max(absval)) if np.any(absval) else np.array([grid.size - 1])
    end = max(int(kept[-1]) + 2, min(grid.size, 8))
    return SampledFunction(grid=grid[:end], values=values[:end])


def majorization_ratio(g: SampledFunction, phi: WeightProfile) -> float:
    """max |g(r)| / phi(r), computed in log form."""
    absval = np.abs(g.values)
    nonzero = absval > 0
    if not np.any(nonzero):
        return 0.0
    log_ratio = np.log(absval[nonzero]) + phi.log_evaluate(g.grid[nonzero])
    return float(np.exp(np.max(log_ratio)))


def _spectrum(field: RadialField, config: RunConfig, route: TransformRoute):
    if route is TransformRoute.SONINE_DESCENT:
        return spectrum_report(
            field, config.sigma, route=route, units=config.units,
            shells=DESCENT_SHELLS, nodes=DESCENT_NODES, **DESCENT_OPTIONS,
        )
    return spectrum_report(field, config.sigma, route=route, units=config.units)


def _spectrum_entries(report, prefix: str = "spectrum") -> Dict[str, object]:
    return {
        f"{prefix}.route": report.route,
        f"{prefix}.leakage_ratio": report.leakage_ratio,
        f"{prefix}.total_energy": report.total_energy,
        f"{prefix}.plancherel_defect": report.plancherel_defect,
        f"{prefix}.target_radius": report.target_radius,
        f"{prefix}.units": report.units,
    }


def _run_construct(config: RunConfig, phi: WeightProfile) -> int:
    d = config.dim
    if config.clamp is not None:
        phi = clamp_weight(phi, config.clamp)
    if radial_l2_norm(phi, d).divergent:
        raise NotAdmissible(f"weight is not square integrable on R^{d}; pass --clamp Q to clamp it")

    ceiling = config.leakage_ceiling
    result = build_generator(
        phi,
        config.sigma_cyclic,
        d=d,
        grid_points=config.grid_points,
        extent=config.extent,
    )
    ratio = majorization_ratio(result.g, phi)
    profile = _coarsen(result.g)
    field = RadialField(profile=profile, d=d)
    routes = _applicable_routes(d)
    reports = {route: _spectrum(field, config, route) for route in routes}
    spectrum = reports[TransformRoute.DIRECT]

    out = config.out
    write_profile(out / "profile.csv", profile, config.units)
    candidate = result.candidate.samples
    write_frame(out / "candidate.csv", profile_frame(candidate.grid, candidate.values).rename(columns={"r": "x"}), config.units)
    write_spectrum(out / "spectrum.csv", spectrum)

    entries: Dict[str, object] = {
        "command": "construct",
        "dim": d,
        "sigma": config.sigma,
        "leakage_ceiling": ceiling,
        "majorization_ratio": ratio,
        "majorization_ok": ratio <= 1.0 + MAJORIZATION_TOL,
        "generator.origin_value": float(np.real(result.g.values[0])),
        "generator.lower_bound_constant": result.lower_bound_constant,
        "generator.ball_norm": result.ball_norm,
        "generator.plateau_radius": result.plateau_radius,
        "candidate.leakage_1d": result.candidate.leakage,
        "candidate.lipschitz_bound": result.candidate.lipschitz_bound,
        "candidate.bernstein_bound": result.candidate.bernstein_bound,
        "candidate.flags": ",".join(result.symmetric.flags) or "none",
        "candidate.zero_order": result.symmetric.zero_order,
    }
    entries.update(_spectrum_entries(spectrum))
    for route, report in reports.items():
        entries.update(_spectrum_entries(report, prefix=f"spectrum.{route.value.lower()}"))
    worst = max(report.leakage_ratio for report in reports.values())
    entries["spectrum.routes"] = [route.value for route in routes]
    entries["spectrum.worst_leakage_ratio"] = worst
    if result.report is not None:
        entries.update({f"admissibility.{k}": v for k, v in result.report.as_dict().items()})
    write_report(out / "spectrum_report.txt", entries)

    if ratio > 1.0 + MAJORIZATION_TOL:
        raise MajorizationViolated(f"majorization: max |f|/w = {ratio:.12g} exceeds 1")
    if worst > ceiling:
        raise LeakageTooHigh(worst, ceiling)
    print(f"leakage_ratio={worst:.6e}")
    return 0


def cmd_construct(config: RunConfig) -> int:
    return _run_construct(config, _weight_profile(config))


def _read_input(config: RunConfig) -> SampledFunction:
    if config.input is None:
        raise ParseError("an input profile CSV is required")
    g, units = read_profile(config.input)
    if units is not None and units is not config.units:
        logger.warning(f"{config.input} was written in {units.value} units, reading with {config.units.value}")
    return g


def cmd_transform(config: RunConfig) -> int:
    g = _read_input(config)
    field = RadialField(profile=g, d=config.dim)
    route = config.route
    xi = np.linspace(0.0, 3.0 * config.sigma, TRANSFORM_POINTS)
    options = DESCENT_OPTIONS if route is TransformRoute.SONINE_DESCENT else {}
    transform = route_function(route, config.dim, **options)(field, xi, config.units)
    spectrum = _spectrum(field, config, route)

    out = config.out
    write_transform(out / "transform.csv", transform, config.units)
    write_spectrum(out / "spectrum.csv", spectrum)
    entries: Dict[str, object] = {"command": "transform", "dim": config.dim, "sigma": config.sigma}
    entries.update(_spectrum_entries(spectrum))
    write_report(out / "spectrum_report.txt", entries)
    print(f"leakage_ratio={spectrum.leakage_ratio:.6e}")
    return 0


def _applicable_routes(d: int) -> List[TransformRoute]:
    routes = [TransformRoute.DIRECT]
    if d % 2 == 1 and d > 1:
        routes.append(TransformRoute.ODD_CLOSED_FORM)
    elif d % 2 == 0:
        routes.append(TransformRoute.SONINE_DESCENT)
    return routes


def _audit_taus(config: RunConfig) -> np.ndarray:
    edge = 2.0 * np.pi * config.sigma_cyclic
    return np.linspace(1.25 * edge, 5.0 * edge, MOMENT_TAUS)


def _moment_defect(g: SampledFunction, config: RunConfig) -> float:
    """Largest |C_m|, |S_m| beyond the band, relative to the matching int |g| r^p."""
    scales = np.maximum(moment_scales(g, config.dim), np.finfo(float).tiny)
    worst = 0.0
    for tau in _audit_taus(config):
        values = np.abs(np.asarray(moment_integrals(g, tau, config.dim)))
        worst = max(worst, float(np.max(values / scales)))
    return worst


def _inner_sonine_defect(g: SampledFunction, config: RunConfig) -> float:
    d = config.dim
    scale = float(np.sum(radial_weights(g.grid, d + 1) * np.abs(g.values) * g.grid ** (0.5 * (d + 1))))
    if scale == 0.0:
        return 0.0
    values = np.abs(inner_sonine_values(g, _audit_taus(config), d))
    return float(np.max(values)) / scale


def cmd_verify(config: RunConfig) -> int:
    g = _read_input(config)
    phi = _weight_profile(config)
    d = config.dim
    ceiling = config.leakage_ceiling
    checks: Dict[str, bool] = {}
    entries: Dict[str, object] = {"command": "verify", "dim": d, "sigma": config.sigma, "leakage_ceiling": ceiling}

    ratio = majorization_ratio(g, phi)
    checks["majorization"] = ratio <= 1.0 + MAJORIZATION_TOL
    entries["majorization_ratio"] = ratio
    checks["nonzero"] = bool(np.any(np.abs(g.values) > 0))

    field = RadialField(profile=g, d=d)
    for route in _applicable_routes(d):
        key = route.value.lower()
        try:
            report = _spectrum(field, config, route)
        except BMForgeError as exc:
            logger.error(f"Spectrum via {route.value} failed: {exc}")
            checks[f"leakage.{key}"] = False
            continue
        entries.update(_spectrum_entries(report, prefix=f"spectrum.{key}"))
        checks[f"leakage.{key}"] = report.leakage_ratio <= ceiling

    try:
        if d % 2 == 1:
            defect = _moment_defect(g, config)
            entries["moments.defect"] = defect
            checks["moments"] = defect <= config.tol_moment
        else:
            defect = _inner_sonine_defect(g, config)
            entries["inner_sonine.defect"] = defect
            checks["inner_sonine"] = defect <= config.tol_moment
    except BMForgeError as exc:
        logger.error(f"Moment check failed: {exc}")
        checks["moments" if d % 2 == 1 else "inner_sonine"] = False

    entries.update({f"check.{name}": "pass" if ok else "fail" for name, ok in checks.items()})
    write_report(config.out / "verify_report.txt", entries)
    failed = sorted(name for name, ok in checks.items() if not ok)
    for name in failed:
        logger.error(f"Check failed: {name}")
    print(f"checks_failed={len(failed)}")
    return 1 if failed else 0


def cmd_majorize(config: RunConfig) -> int:
    if not config.weight:
        raise ParseError("--weight is required")
    if config.gamma is None:
        raise ParseError("--gamma is required")
    d = config.dim
    result = reduce_nonradial_detailed(
        config.weight, d, config.gamma, config.sigma_cyclic, j_max=config.j_max, seed=config.seed
    )
    profile = result.profile
    decomp = result.decomposition
    write_frame(config.out / "omega_rad.csv", profile_frame(profile.grid, profile.values, profile.log_values))

    entries: Dict[str, object] = {f"holder.{k}": v for k, v in result.holder.as_dict().items()}
    entries.update(
        {
            "command": "majorize",
            "dim": d,
            "gamma": config.gamma,
            "seed": config.seed,
            "annuli.j_max": decomp.j_max,
            "annuli.lambdas": decomp.lambdas,
            "annuli.sample_maxima": decomp.sample_maxima,
            "annuli.covering_radii": decomp.covering_radii,
            "annuli.local_lipschitz": decomp.local_lipschitz,
            "annuli.offset": decomp.offset,
            "annuli.smoothing_slope": decomp.smoothing_slope,
            "audit.samples": result.audit_samples,
            "audit.worst_margin": result.worst_margin,
            "admissibility.verdict": result.admissibility.verdict,
        }
    )
    write_report(config.out / "holder_report.txt", entries)
    print(f"holder_lhs_sum={result.holder.lhs_sum:.17g}")
    if config.chain:
        logger.info("Continuing with construct on the radial majorant")
        return _run_construct(config, profile)
    return 0


def cmd_calibrate(config: RunConfig) -> int:
    entries: Dict[str, object] = {}
    reference = float(np.sqrt(2.0 / np.pi))
    for d in CALIBRATE_DIMS:
        c = calibrate_sonine_constant(0.5 * d - 0.5, -0.5)
        entries[f"sonine.d{d:02d}.constant"] = c
        entries[f"sonine.d{d:02d}.defect"] = abs(c - reference)
    write_report(config.out / "sonine_constants.txt", entries)
    for key in sorted(entries):
        value = entries[key]
        print(f"{key}={value:.17g}")
    return 0


HANDLERS = {
    "construct": cmd_construct,
    "transform": cmd_transform,
    "verify": cmd_verify,
    "majorize": cmd_majorize,
    "calibrate": cmd_calibrate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if not args.command:
        parser.print_help(sys.stderr)
        return ParseError.exit_code

    try:
        config = load_config(args)
        return HANDLERS[config.command](config)
    except BMForgeError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return 1


if __name__ == "__main__":
    sys.exit(main())
