"""
Output Files

CSV files start with a ``# units=<angular|cyclic>`` line and carry floats
at full precision so identical runs produce identical bytes. Reports are
sorted ``key=value`` lines.
"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..domain.models import SampledFunction, SpectrumReport, Units
from ..errors import ParseError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
UNITS_PREFIX = "# units="


def write_frame(path: Path, frame: pd.DataFrame, units: Units = Units.CYCLIC) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(f"{UNITS_PREFIX}{units.value}\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def profile_frame(grid: np.ndarray, values: np.ndarray, log_values: Optional[np.ndarray] = None) -> pd.DataFrame:
    values = np.asarray(values)
    frame = pd.DataFrame(
        {
            "r": np.asarray(grid, dtype=float),
            "value_real": np.real(values).astype(float),
            "value_imag": np.imag(values).astype(float),
        }
    )
    if log_values is not None:
        frame["log_value"] = np.asarray(log_values, dtype=float)
    return frame


def write_profile(path: Path, f: SampledFunction, units: Units = Units.CYCLIC) -> Path:
    return write_frame(path, profile_frame(f.grid, f.values), units)


def write_transform(path: Path, f: SampledFunction, units: Units = Units.CYCLIC) -> Path:
    frame = profile_frame(f.grid, f.values).rename(columns={"r": "xi"})
    return write_frame(path, frame, units)


def write_spectrum(path: Path, report: SpectrumReport) -> Path:
    frame = pd.DataFrame(
        {
            "xi_lo": report.shell_edges[:-1],
            "xi_hi": report.shell_edges[1:],
            "xi": report.shell_centers,
            "shell_energy": report.shell_energies,
        }
    )
    return write_frame(path, frame, report.units)


def read_units(path: Path) -> Optional[Units]:
    with Path(path).open("r", encoding="utf-8") as handle:
        first = handle.readline().strip()
    if not first.startswith(UNITS_PREFIX):
        return None
    try:
        return Units(first[len(UNITS_PREFIX):].strip())
    except ValueError as exc:
        raise ParseError(f"{path}: unknown units '{first}'") from exc


def read_profile(path: Union[str, Path]) -> Tuple[SampledFunction, Optional[Units]]:
    """Radial samples from (r, value_real[, value_imag]) columns."""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"no such file: {path}")
    try:
        frame = pd.read_csv(path, comment="#")
        units = read_units(path)
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if frame.shape[1] < 2 or frame.empty:
        raise ParseError(f"{path} needs at least two columns of samples")
    try:
        frame = frame.apply(pd.to_numeric, errors="raise")
    except (ValueError, TypeError) as exc:
        raise ParseError(f"non-numeric samples in {path}: {exc}") from exc
    grid = frame.iloc[:, 0].to_numpy(dtype=float)
    values = frame.iloc[:, 1].to_numpy(dtype=float)
    if "value_imag" in frame.columns and np.any(frame["value_imag"].to_numpy(dtype=float) != 0.0):
        values = values + 1j * frame["value_imag"].to_numpy(dtype=float)
    try:
        return SampledFunction(grid=grid, values=values), units
    except ValueError as exc:
        raise ParseError(f"invalid samples in {path}: {exc}") from exc


def _format(value: object) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % float(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return ";".join(_format(v) for v in value)
    return str(value)


def format_report(entries: Mapping[str, object]) -> str:
    return "".join(f"{key}={_format(entries[key])}\n" for key in sorted(entries))


def write_report(path: Path, entries: Mapping[str, object]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_report(entries), encoding="utf-8")
    return path


def read_report(path: Union[str, Path]) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            out[key] = value
    return out
