"""
Spectral Shell Energies

Bins |psi^(xi)|^2 |S^{d-1}| |xi|^{d-1} over radial shells with Gauss-Legendre
nodes and compares the energy inside the ball of radius sigma with the
total energy from the profile side (Plancherel).
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Optional

import numpy as np

from ..domain.models import RadialField, SpectrumReport, TransformRoute, Units
from ..errors import DimensionNotEven, DimensionNotOdd, InvalidSamples
from ..onedim.generator import sphere_area
from ..quadrature import panel_rule
from .transform import radial_fourier_direct, radial_fourier_odd, radial_weights, sonine_descent_transform

logger = logging.getLogger(__name__)

DEFAULT_SHELLS = 32
DEFAULT_NODES = 8
DEFAULT_REACH = 3.0


def route_function(route: TransformRoute, d: int, **options) -> Callable:
    if route is TransformRoute.ODD_CLOSED_FORM and d % 2 == 0:
        raise DimensionNotOdd(f"{route.value} route needs odd d, got {d}")
    if route is TransformRoute.SONINE_DESCENT and d % 2 == 1:
        raise DimensionNotEven(f"{route.value} route needs even d, got {d}")
    table: Dict[TransformRoute, Callable] = {
        TransformRoute.DIRECT: radial_fourier_direct,
        TransformRoute.ODD_CLOSED_FORM: radial_fourier_odd,
        TransformRoute.SONINE_DESCENT: lambda field, xi, units: sonine_descent_transform(field, xi, units, **options),
    }
    return table[route]


def total_energy(field: RadialField) -> float:
    """||psi||^2 on R^d from the profile."""
    r = field.profile.grid
    w = radial_weights(r, field.d)
    return float(sphere_area(field.d) * np.sum(w * np.abs(field.profile.values) ** 2 * r ** (field.d - 1)))


def spectrum_report(
    field: RadialField,
    sigma: float,
    route: TransformRoute = TransformRoute.DIRECT,
    units: Units = Units.CYCLIC,
    xi_max: Optional[float] = None,
    shells: int = DEFAULT_SHELLS,
    nodes: int = DEFAULT_NODES,
    **route_options,
) -> SpectrumReport:
    """Shell energies on [0, sigma] and [sigma, xi_max], the leakage share outside B(0, sigma).

    ``sigma`` and ``xi_max`` are in ``units``; energies do not depend on them.
    """
    if sigma <= 0:
        raise InvalidSamples(f"sigma must be positive, got {sigma}")
    d = field.d
    transform = route_function(route, d, **route_options)
    # work in cyclic units, report edges in the requested ones
    scale = 2.0 * np.pi if units is Units.ANGULAR else 1.0
    edge = sigma / scale
    reach = (xi_max / scale) if xi_max is not None else DEFAULT_REACH * edge
    if reach <= edge:
        raise InvalidSamples(f"xi_max must exceed sigma, got {reach * scale} <= {sigma}")

    edges = np.concatenate([np.linspace(0.0, edge, shells + 1), np.linspace(edge, reach, shells + 1)[1:]])
    xi, w = panel_rule(edges, nodes)
    values = transform(field, xi, Units.CYCLIC).values
    density = np.abs(values) ** 2 * sphere_area(d) * xi ** (d - 1)
    shell_energies = (w * density).reshape(-1, nodes).sum(axis=1)

    total = total_energy(field)
    inside = float(np.sum(shell_energies[:shells]))
    outside = float(np.sum(shell_energies[shells:]))
    # energy seen in the outer shells bounds the leakage from below
    leakage = max(1.0 - inside / total, outside / total) if total > 0 else 0.0
    leakage = float(min(1.0, max(0.0, leakage)))
    defect = abs(float(np.sum(shell_energies)) - total) / total if total > 0 else 0.0
    logger.info(
        f"Spectrum ({route.value}, d={d}): leakage={leakage:.3e} inside={inside:.6g} "
        f"total={total:.6g} plancherel_defect={defect:.3e}"
    )
    return SpectrumReport(
        shell_edges=edges * scale,
        shell_energies=shell_energies,
        target_radius=sigma,
        leakage_ratio=leakage,
        route=route,
        total_energy=total,
        plancherel_defect=defect,
        units=units,
    )
