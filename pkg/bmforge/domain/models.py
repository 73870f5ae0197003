"""
Domain Models

Sampled functions, weight profiles and the report records passed between
the pipeline stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import InvalidSamples

LOG_TOL = 1e-12


class Symmetry(Enum):
    NONE = "none"
    EVEN = "even"
    ODD = "odd"


class Units(Enum):
    """Frequency convention of a transform: e^{-i xi x} or e^{-2 pi i xi x}."""

    ANGULAR = "angular"
    CYCLIC = "cyclic"


class Verdict(Enum):
    HAN_SCHLAG_ADMISSIBLE = "HanSchlagAdmissible"
    BM_ADMISSIBLE = "BMAdmissible"
    INADMISSIBLE = "Inadmissible"


class BesselRoute(Enum):
    POISSON = "Poisson"
    RAYLEIGH = "Rayleigh"
    SONINE = "Sonine"


class TransformRoute(Enum):
    DIRECT = "Direct"
    ODD_CLOSED_FORM = "OddClosedForm"
    SONINE_DESCENT = "SonineDescent"


def _check_grid(grid: np.ndarray) -> None:
    if grid.ndim != 1:
        raise InvalidSamples("grid must be one dimensional")
    if grid.size >= 2 and not np.all(np.diff(grid) > 0):
        raise InvalidSamples("grid must be strictly increasing")
    if not np.all(np.isfinite(grid)):
        raise InvalidSamples("grid contains non-finite abscissae")


@dataclass
class SampledFunction:
    """Real or complex samples on a 1D grid.

    With ``symmetry`` EVEN or ODD only the samples at ``grid >= 0`` are
    stored and evaluation reflects them. Evaluation interpolates linearly
    and returns 0 outside the stored extent.
    """

    grid: np.ndarray
    values: np.ndarray
    symmetry: Symmetry = Symmetry.NONE
    extent: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        self.values = values
        _check_grid(self.grid)
        if self.values.shape != self.grid.shape:
            raise InvalidSamples(
                f"values shape {self.values.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidSamples("values contain non-finite samples")
        if self.symmetry is not Symmetry.NONE and self.grid.size and self.grid[0] < 0:
            raise InvalidSamples(f"{self.symmetry.value} function must store r >= 0 only")
        if self.extent is None and self.grid.size:
            hi = float(self.grid[-1])
            lo = -hi if self.symmetry is not Symmetry.NONE else float(self.grid[0])
            self.extent = (lo, hi)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def spacing(self) -> float:
        """Largest spacing of the stored grid."""
        if self.grid.size < 2:
            return 0.0
        return float(np.max(np.diff(self.grid)))

    def _interp(self, x: np.ndarray) -> np.ndarray:
        if self.is_complex:
            re = np.interp(x, self.grid, self.values.real, left=0.0, right=0.0)
            im = np.interp(x, self.grid, self.values.imag, left=0.0, right=0.0)
            return re + 1j * im
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.symmetry is Symmetry.NONE:
            return self._interp(x)
        out = self._interp(np.abs(x))
        if self.symmetry is Symmetry.ODD:
            out = np.sign(x) * out
        return out

    def full_line(self) -> "SampledFunction":
        """Explicit listing on both half-lines, tagged NONE."""
        if self.symmetry is Symmetry.NONE:
            return self
        pos = self.grid[self.grid > 0]
        vals_pos = self.values[self.grid > 0]
        sign = -1.0 if self.symmetry is Symmetry.ODD else 1.0
        grid = np.concatenate([-pos[::-1], self.grid[self.grid == 0], pos])
        values = np.concatenate([sign * vals_pos[::-1], self.values[self.grid == 0], vals_pos])
        return SampledFunction(grid=grid, values=values, symmetry=Symmetry.NONE)

    def restrict_positive(self) -> "SampledFunction":
        """Samples at ``grid >= 0``, tagged NONE."""
        keep = self.grid >= 0
        return SampledFunction(grid=self.grid[keep], values=self.values[keep])


@dataclass
class WeightProfile:
    """Radial weight phi on a grid starting at 0, with Omega = log(1/phi).

    ``log_values`` is the primary data. ``values`` is derived from it and may
    underflow to 0.0 far out, where the weight is still positive.
    """

    grid: np.ndarray
    log_values: np.ndarray
    dimension_hint: Optional[int] = None
    values: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float)
        self.log_values = np.asarray(self.log_values, dtype=float)
        _check_grid(self.grid)
        if self.grid.size == 0 or self.grid[0] != 0.0:
            raise InvalidSamples("weight grid must start at 0")
        if self.log_values.shape != self.grid.shape:
            raise InvalidSamples("log_values shape does not match grid shape")
        if not np.all(np.isfinite(self.log_values)):
            raise InvalidSamples("weight must be positive: log_values contain non-finite samples")
        if np.any(self.log_values < -LOG_TOL):
            raise InvalidSamples("weight exceeds 1 somewhere: log_values must be >= 0")
        self.log_values = np.maximum(self.log_values, 0.0)
        self.values = np.exp(-self.log_values)

    @classmethod
    def from_values(
        cls, grid, values, dimension_hint: Optional[int] = None
    ) -> "WeightProfile":
        values = np.asarray(values, dtype=float)
        if np.any(values <= 0) or np.any(values > 1 + LOG_TOL) or not np.all(np.isfinite(values)):
            raise InvalidSamples("weight values must lie in (0, 1]")
        return cls(grid=grid, log_values=-np.log(np.minimum(values, 1.0)), dimension_hint=dimension_hint)

    def evaluate(self, r) -> np.ndarray:
        return np.exp(-self.log_evaluate(r))

    def log_evaluate(self, r) -> np.ndarray:
        """Omega at |r|, linear between nodes and constant past the last node."""
        return np.interp(np.abs(np.asarray(r, dtype=float)), self.grid, self.log_values)

    def as_sampled(self) -> SampledFunction:
        return SampledFunction(grid=self.grid, values=self.values.copy())

    def log_as_sampled(self) -> SampledFunction:
        return SampledFunction(grid=self.grid, values=self.log_values.copy())


@dataclass
class LogIntegralResult:
    """Partial integrals of a log-weight under the doubling rule."""

    value: float
    tail_estimate: float
    divergent: bool
    cutoff: float
    partials: List[float] = field(default_factory=list)


@dataclass
class AdmissibilityReport:
    log_integral: float
    lipschitz_constant: float
    hilbert_deriv_sup: float
    l2_decay_ok: bool
    verdict: Verdict
    sigma: float
    dimension: int
    log_integral_divergent: bool = False
    radial_log_integral: float = float("nan")
    radial_l2_ok: bool = True
    threshold_full: float = 0.0
    threshold_half: float = 0.0
    holds_full: bool = False
    holds_half: bool = False

    def as_dict(self) -> Dict[str, object]:
        return {
            "log_integral": self.log_integral,
            "log_integral_divergent": self.log_integral_divergent,
            "radial_log_integral": self.radial_log_integral,
            "lipschitz_constant": self.lipschitz_constant,
            "hilbert_deriv_sup": self.hilbert_deriv_sup,
            "hilbert_threshold_pi_sigma": self.threshold_full,
            "hilbert_threshold_half_pi_sigma": self.threshold_half,
            "hilbert_holds_pi_sigma": self.holds_full,
            "hilbert_holds_half_pi_sigma": self.holds_half,
            "l2_decay_ok": self.l2_decay_ok,
            "radial_l2_ok": self.radial_l2_ok,
            "sigma": self.sigma,
            "dimension": self.dimension,
            "verdict": self.verdict.value,
        }


@dataclass
class BandlimitedCandidate:
    """A function on a periodic grid with spectrum measured against ``band``.

    ``samples`` lives on x_j = -L/2 + j L/n. ``band`` is in cyclic units.
    """

    samples: SampledFunction
    sigma: float
    band: Tuple[float, float]
    weight: SampledFunction
    period: float
    origin_value: complex = 0.0
    lipschitz_bound: float = 0.0
    bernstein_bound: float = 0.0
    leakage: float = 0.0
    zero_order: int = 0
    deflation_scale: float = 1.0
    flags: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.samples.grid.shape != self.weight.grid.shape:
            raise InvalidSamples("candidate and weight must share the grid")

    @property
    def spacing(self) -> float:
        return self.period / self.samples.grid.size

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples.values) ** 2) * self.spacing))

    @property
    def majorization_ratio(self) -> float:
        """max |f| / omega over the grid."""
        w = self.weight.values
        f = np.abs(self.samples.values)
        ratio = np.where(w > 0, f / np.where(w > 0, w, 1.0), np.where(f > 0, np.inf, 0.0))
        return float(np.max(ratio))


@dataclass
class BesselEval:
    order: float
    argument: float
    value: float
    route: BesselRoute


@dataclass
class PQPolynomials:
    """y^{d/2} J_{d/2-1}(y) = c(d) (cos(y) P(y) + sin(y) Q(y)).

    Coefficient arrays are indexed by power.
    """

    d: int
    p_coeffs: np.ndarray
    q_coeffs: np.ndarray
    prefactor: float
    p_parity: str = ""
    q_parity: str = ""
    audit_error: float = float("nan")

    def cos_poly(self, y) -> np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(y, dtype=float), self.p_coeffs)

    def sin_poly(self, y) -> np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(y, dtype=float), self.q_coeffs)

    def kernel(self, y) -> np.ndarray:
        """c(d) (cos(y) P(y) + sin(y) Q(y))."""
        y = np.asarray(y, dtype=float)
        return self.prefactor * (np.cos(y) * self.cos_poly(y) + np.sin(y) * self.sin_poly(y))

    def term_scale(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return self.prefactor * (np.abs(np.cos(y) * self.cos_poly(y)) + np.abs(np.sin(y) * self.sin_poly(y)))


@dataclass
class RadialField:
    """psi(x) = profile(|x|) on R^d."""

    profile: SampledFunction
    d: int

    def __post_init__(self) -> None:
        if self.profile.grid.size and self.profile.grid[0] < 0:
            raise InvalidSamples("radial profile must be sampled on r >= 0")


@dataclass
class SpectrumReport:
    shell_edges: np.ndarray
    shell_energies: np.ndarray
    target_radius: float
    leakage_ratio: float
    route: TransformRoute
    total_energy: float = 0.0
    plancherel_defect: float = 0.0
    units: Units = Units.CYCLIC

    @property
    def shell_centers(self) -> np.ndarray:
        return 0.5 * (self.shell_edges[1:] + self.shell_edges[:-1])


@dataclass
class AnnulusDecomposition:
    """Dyadic annuli E_0 = B(0,2), E_j = B(0,2^{j+1}) minus B(0,2^j) for j >= 1."""

    d: int
    j_max: int
    lambdas: np.ndarray
    gamma: float
    sample_maxima: np.ndarray = field(default_factory=lambda: np.zeros(0))
    covering_radii: np.ndarray = field(default_factory=lambda: np.zeros(0))
    local_lipschitz: np.ndarray = field(default_factory=lambda: np.zeros(0))
    offset: float = 0.0
    smoothing_slope: float = 0.0

    def __post_init__(self) -> None:
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        if np.any(self.lambdas < 0):
            raise InvalidSamples("annulus maxima must be nonnegative")

    @property
    def outer_radii(self) -> np.ndarray:
        return 2.0 ** (np.arange(self.lambdas.size) + 1)

    @property
    def inner_radii(self) -> np.ndarray:
        inner = 2.0 ** np.arange(self.lambdas.size)
        inner[:1] = 0.0
        return inner


@dataclass
class HolderReport:
    """S1 = sum lambda_j^{d+1} 2^{-j gamma} (lhs_sum) and S2 = sum lambda_j 2^{-j} (rhs_sum)."""

    lhs_sum: float
    rhs_sum: float
    beta: float
    constant: float
    bound: float
    holds: bool
    divergent: bool
    tail_estimate: float = 0.0

    def as_dict(self) -> Dict[str, object]:
        return {
            "lhs_sum": self.lhs_sum,
            "rhs_sum": self.rhs_sum,
            "beta": self.beta,
            "holder_constant": self.constant,
            "bound": self.bound,
            "holds": self.holds,
            "divergent": self.divergent,
            "tail_estimate": self.tail_estimate,
        }
