"""
Dyadic Annulus Maxima

Samples a non-radial log-weight Omega on E_0 = B(0, 2) and the shells
E_j = B(0, 2^{j+1}) minus B(0, 2^j), and turns the sampled maxima into
upper bounds lambda_j = max(0, sample max + C_j h_j), where h_j is the
covering radius of the sample and C_j a nearest-neighbour slope estimate.
The bounds then feed a radial Lipschitz majorant Omega_1 >= Omega - Omega(0).
"""

from __future__ import annotations

import concurrent.futures as cf
import logging
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import norm, qmc

from ..config import get_settings
from ..domain.models import AnnulusDecomposition, WeightProfile
from ..errors import DimensionInvalid, EvaluationFailed, InvalidSamples
from ..weights.profile import graded_grid

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]

QUERY_FACTOR = 4
QUERY_SEED_OFFSET = 104_729
GROWTH_TOL = 1e-9


def unit_directions(u: np.ndarray) -> np.ndarray:
    gauss = norm.ppf(np.clip(u, 1e-12, 1.0 - 1e-12))
    lengths = np.linalg.norm(gauss, axis=1, keepdims=True)
    return gauss / np.maximum(lengths, np.finfo(float).tiny)


def _shell(d: int, inner: float, outer: float, samples: int, seed: int) -> np.ndarray:
    """Sobol points volume-uniform in inner <= |x| <= outer."""
    m = int(np.ceil(np.log2(max(samples, 2))))
    u = qmc.Sobol(d=d + 1, scramble=True, seed=seed).random_base2(m)
    radius = (inner ** d + u[:, 0] * (outer ** d - inner ** d)) ** (1.0 / d)
    return radius[:, None] * unit_directions(u[:, 1:])


def annulus_points(d: int, j: int, samples: int, seed: int) -> np.ndarray:
    """Interior sample of the closure of E_j, both bounding spheres and the axis points on them."""
    inner = 0.0 if j == 0 else 2.0 ** j
    outer = 2.0 ** (j + 1)
    interior = _shell(d, inner, outer, samples, seed)
    directions = interior / np.maximum(np.linalg.norm(interior, axis=1, keepdims=True), np.finfo(float).tiny)
    axes = np.vstack([np.eye(d), -np.eye(d)])
    parts = [interior, outer * directions, outer * axes]
    if inner > 0.0:
        parts.extend([inner * directions, inner * axes])
    else:
        parts.append(np.zeros((1, d)))
    return np.vstack(parts)


def evaluate_log_weight(log_omega: Evaluator, points: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(log_omega(points), dtype=float)
    except (ArithmeticError, ValueError, TypeError) as exc:
        raise EvaluationFailed(f"log-weight evaluation failed: {exc}") from exc
    if values.shape != (points.shape[0],) or not np.all(np.isfinite(values)):
        raise EvaluationFailed("log-weight is not finite at every sample")
    return values


def covering_radius(points: np.ndarray, queries: np.ndarray) -> float:
    """Largest distance from a query point to its nearest sample."""
    dist, _ = cKDTree(points).query(queries, k=1)
    return float(np.max(dist))


def local_lipschitz(points: np.ndarray, values: np.ndarray) -> float:
    """Largest slope |Omega(x) - Omega(y)| / |x - y| over nearest-neighbour pairs."""
    k = min(points.shape[1] + 2, points.shape[0])
    if k < 2:
        return 0.0
    dist, idx = cKDTree(points).query(points, k=k)
    dist, idx = dist[:, 1:], idx[:, 1:]
    keep = dist > 0.0
    if not np.any(keep):
        return 0.0
    slopes = np.abs(values[:, None] - values[idx])[keep] / dist[keep]
    return float(np.max(slopes))


def _one_annulus(
    log_omega: Evaluator, offset: float, d: int, j: int, samples: int, seed: int
) -> Tuple[float, float, float, float]:
    points = annulus_points(d, j, samples, seed + j)
    values = evaluate_log_weight(log_omega, points) - offset
    inner = 0.0 if j == 0 else 2.0 ** j
    queries = _shell(d, inner, 2.0 ** (j + 1), QUERY_FACTOR * samples, seed + QUERY_SEED_OFFSET + j)
    h = covering_radius(points, queries)
    slope = local_lipschitz(points, values)
    raw = float(np.max(values))
    return max(0.0, raw + slope * h), raw, h, slope


def envelope_nodes(lambdas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes of the piecewise linear envelope: lambda_0 at 0, max of both neighbours at 2^{j+1}."""
    lambdas = np.asarray(lambdas, dtype=float)
    nxt = np.append(lambdas[1:], lambdas[-1])
    radii = np.concatenate([[0.0], 2.0 ** (np.arange(lambdas.size) + 1)])
    values = np.concatenate([[lambdas[0]], np.maximum(lambdas, nxt)])
    return radii, values


def smoothing_slope(lambdas: np.ndarray) -> float:
    radii, values = envelope_nodes(lambdas)
    return float(np.max(np.abs(np.diff(values)) / np.diff(radii)))


def annulus_maxima(
    log_omega: Evaluator,
    d: int,
    j_max: Optional[int] = None,
    samples: Optional[int] = None,
    seed: int = 0,
    gamma: float = float("nan"),
    threads: Optional[int] = None,
) -> AnnulusDecomposition:
    """Per-annulus upper bounds of Omega - Omega(0) for j = 0..j_max.

    Annuli are sampled in parallel; results are stored by index so the
    decomposition does not depend on completion order.
    """
    if d < 1:
        raise DimensionInvalid(f"dimension must be >= 1, got {d}")
    settings = get_settings()
    j_max = settings.j_max if j_max is None else j_max
    samples = samples or settings.samples_per_annulus
    if j_max < 0:
        raise InvalidSamples(f"j_max must be >= 0, got {j_max}")
    n_threads = max(1, threads if threads is not None else settings.threads)

    offset = float(evaluate_log_weight(log_omega, np.zeros((1, d)))[0])
    count = j_max + 1
    results = [None] * count
    if n_threads == 1:
        for j in range(count):
            results[j] = _one_annulus(log_omega, offset, d, j, samples, seed)
    else:
        with cf.ThreadPoolExecutor(max_workers=n_threads) as executor:
            fs = {executor.submit(_one_annulus, log_omega, offset, d, j, samples, seed): j for j in range(count)}
            cf.wait(fs)
            for future, j in fs.items():
                results[j] = future.result()

    lambdas, raw, h, slopes = (np.array(col) for col in zip(*results))
    cap = float(np.max(slopes)) * 2.0 ** (np.arange(count) + 1)
    over = lambdas > cap * (1.0 + GROWTH_TOL) + GROWTH_TOL
    if np.any(over):
        logger.warning(f"Annulus bounds exceed the Lipschitz growth cap at j={np.flatnonzero(over).tolist()}")

    decomp = AnnulusDecomposition(
        d=d,
        j_max=j_max,
        lambdas=lambdas,
        gamma=gamma,
        sample_maxima=raw,
        covering_radii=h,
        local_lipschitz=slopes,
        offset=offset,
        smoothing_slope=smoothing_slope(lambdas),
    )
    logger.info(
        f"Annulus maxima d={d} j_max={j_max}: offset={offset:.6g} lambda_0={lambdas[0]:.6g} "
        f"lambda_last={lambdas[-1]:.6g} max_inflation={float(np.max(slopes * h)):.4g}"
    )
    return decomp


def _step(decomp: AnnulusDecomposition, r: np.ndarray) -> np.ndarray:
    lambdas = decomp.lambdas
    with np.errstate(divide="ignore"):
        idx = np.ceil(np.log2(np.maximum(r, 2.0))).astype(int) - 1
    return lambdas[np.clip(idx, 0, lambdas.size - 1)]


def build_radial_majorant(decomp: AnnulusDecomposition, r_max: Optional[float] = None) -> WeightProfile:
    """Omega_1 as a Lipschitz radial profile dominating the annulus step function."""
    radii, values = envelope_nodes(decomp.lambdas)
    grid = graded_grid(r_max)
    grid = np.union1d(grid, radii[radii <= grid[-1]])

    inside = grid <= radii[-1]
    omega1 = np.empty(grid.size)
    omega1[inside] = np.interp(grid[inside], radii, values)
    last_slope = max(0.0, (values[-1] - values[-2]) / (radii[-1] - radii[-2]))
    omega1[~inside] = values[-1] + last_slope * (grid[~inside] - radii[-1])
    omega1 = np.maximum(omega1, _step(decomp, grid))

    logger.debug(
        f"Radial majorant on {grid.size} nodes to r={grid[-1]:.3g}, slope={decomp.smoothing_slope:.4g}"
    )
    return WeightProfile(grid=grid, log_values=omega1, dimension_hint=decomp.d)
