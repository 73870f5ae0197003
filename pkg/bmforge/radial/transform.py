"""
Radial Fourier Transforms

For psi(x) = g(|x|) on R^d and angular frequency k = |xi| (cyclic: k = 2 pi |xi|)

    psi^(k) = (2 pi)^{d/2} k^{1-d/2} int_0^inf g(r) J_{d/2-1}(k r) r^{d/2} dr

with the limit |S^{d-1}| int g r^{d-1} dr at k = 0. Three routes:

- direct: Bessel kernel from the Poisson or Rayleigh evaluators
- odd d: the closed cos/sin form with the P/Q polynomials
- even d: descent from d+1 through the Sonine integral with (d/2 - 1/2, -1/2)
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gamma

from ..bessel import bessel_values, calibrate_sonine_constant, pq_polynomials
from ..config import get_settings
from ..domain.models import RadialField, SampledFunction, Units
from ..errors import DimensionInvalid, DimensionNotEven, DimensionNotOdd, TailNotConverged
from ..onedim.generator import sphere_area
from ..parallel import chunk_for, map_chunks
from ..quadrature import (
    averaged_truncations,
    check_moment_tail,
    cumulative_panels,
    gauss_legendre,
    integration_weights,
    is_uniform,
    linear_cosine,
    linear_sine,
    panel_rule,
)

logger = logging.getLogger(__name__)

HEAD_NODES = 24
CHAR_LEVEL = 1e-6
DESCENT_TOL = 1e-6
KINK_FIT_POINTS = 8
KINK_FIT_DEGREE = 5


def _check_dim(d: int) -> None:
    if d < 1:
        raise DimensionInvalid(f"dimension must be >= 1, got {d}")


def radial_weights(grid: np.ndarray, d: int) -> np.ndarray:
    """Quadrature weights for radial integrands on ``grid``.

    r^{d/2} J_{d/2-1}(kr) is r^{d-1} times an even function, so for odd d
    and a uniform grid from 0 the integrand extends evenly and the plain
    trapezoid rule is the accurate choice.
    """
    grid = np.asarray(grid, dtype=float)
    if d % 2 == 1 and grid.size >= 3 and grid[0] == 0.0 and is_uniform(grid):
        h = grid[1] - grid[0]
        w = np.full(grid.size, h)
        w[0] = w[-1] = 0.5 * h
        return w
    return integration_weights(grid)


def _angular(xi: Sequence[float], units: Units) -> np.ndarray:
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return 2.0 * np.pi * xi if units is Units.CYCLIC else xi


def _at_origin(field: RadialField, weights: np.ndarray) -> complex:
    r = field.profile.grid
    return sphere_area(field.d) * np.sum(weights * field.profile.values * r ** (field.d - 1))


def _result(xi: Sequence[float], values: np.ndarray) -> SampledFunction:
    return SampledFunction(grid=np.atleast_1d(np.asarray(xi, dtype=float)), values=values)


def _dtype(field: RadialField):
    return complex if field.profile.is_complex else float


def _line_transform(field: RadialField, xi: Sequence[float], units: Units) -> SampledFunction:
    """d = 1: y^{1/2} J_{-1/2}(y) = sqrt(2/pi) cos y, so psi^(k) = 2 int g cos(kr) dr."""
    r = field.profile.grid
    w = radial_weights(r, 1)
    k = _angular(xi, units)
    check_moment_tail(r, field.profile.values, 0.0, "radial transform")

    def _block(kb: np.ndarray) -> np.ndarray:
        return 2.0 * (np.cos(np.outer(kb, r)) @ (w * field.profile.values))

    values = map_chunks(_block, k, dtype=_dtype(field), chunk=chunk_for(r.size, budget=2_000_000))
    return _result(xi, values)


def radial_fourier_direct(field: RadialField, xi: Sequence[float], units: Units = Units.CYCLIC) -> SampledFunction:
    """psi^ at each |xi| through the Bessel kernel."""
    _check_dim(field.d)
    d = field.d
    if d == 1:
        return _line_transform(field, xi, units)
    r = field.profile.grid
    g = field.profile.values
    check_moment_tail(r, g, 0.5 * (d - 1), "radial transform")
    w = radial_weights(r, d)
    wg = w * g * r ** (0.5 * d)
    order = 0.5 * d - 1.0
    k = _angular(xi, units)
    origin = _at_origin(field, w)

    def _block(kb: np.ndarray) -> np.ndarray:
        out = np.empty(kb.size, dtype=_dtype(field))
        zero = kb == 0.0
        out[zero] = origin
        kp = kb[~zero]
        if kp.size:
            kernel = bessel_values(order, np.outer(kp, r))
            out[~zero] = (2.0 * np.pi) ** (0.5 * d) * kp ** (1.0 - 0.5 * d) * (kernel @ wg)
        return out

    values = map_chunks(_block, k, dtype=_dtype(field), chunk=chunk_for(r.size, budget=2_000_000))
    return _result(xi, values)


def radial_fourier_odd(field: RadialField, xi: Sequence[float], units: Units = Units.CYCLIC) -> SampledFunction:
    """psi^ for odd d through c(d) k^{1-d} int g (cos(kr) P(kr) + sin(kr) Q(kr)) dr."""
    _check_dim(field.d)
    d = field.d
    if d % 2 == 0:
        raise DimensionNotOdd(f"closed-form route needs odd d, got {d}")
    r = field.profile.grid
    g = field.profile.values
    if d == 1:
        return _line_transform(field, xi, units)
    pq = pq_polynomials(d)
    check_moment_tail(r, g, 0.5 * (d - 1), "radial transform")
    w = radial_weights(r, d)
    wg = w * g
    k = _angular(xi, units)
    origin = _at_origin(field, w)

    def _block(kb: np.ndarray) -> np.ndarray:
        out = np.empty(kb.size, dtype=_dtype(field))
        zero = kb == 0.0
        out[zero] = origin
        kp = kb[~zero]
        if kp.size:
            kernel = pq.kernel(np.outer(kp, r))
            out[~zero] = (2.0 * np.pi) ** (0.5 * d) * kp ** (1.0 - d) * (kernel @ wg)
        return out

    values = map_chunks(_block, k, dtype=_dtype(field), chunk=chunk_for(r.size, budget=2_000_000))
    return _result(xi, values)


def moment_scales(g: SampledFunction, d: int) -> List[float]:
    """int |g| r^p dr for the powers used by ``moment_integrals``."""
    w = radial_weights(g.grid, 1)
    absval = np.abs(g.values)
    out = []
    for m in range((d - 1) // 2 + 1):
        out.append(float(np.sum(w * absval * g.grid ** (2 * m))))
        out.append(float(np.sum(w * absval * g.grid ** (2 * m + 1))))
    return out


def moment_integrals(g: SampledFunction, tau: float, d: int) -> List[complex]:
    """[C_0, S_0, C_1, S_1, ...] with C_m = int g cos(tau r) r^{2m}, S_m = int g sin(tau r) r^{2m+1}."""
    _check_dim(d)
    if d % 2 == 0:
        raise DimensionNotOdd(f"moment conditions are stated for odd d, got {d}")
    r = g.grid
    if not np.any(g.values):
        return [0.0] * (d + 1)
    check_moment_tail(r, g.values, float(d), "moment integrals")
    out: List[complex] = []
    for m in range((d - 1) // 2 + 1):
        c = linear_cosine(r, g.values * r ** (2 * m), [tau])[0]
        s = linear_sine(r, g.values * r ** (2 * m + 1), [tau])[0]
        if not g.is_complex:
            c, s = c.real, s.real
        out.extend([c, s])
    return out


def inner_sonine_values(g: SampledFunction, tau: Sequence[float], d: int) -> np.ndarray:
    """int r^{d/2+1/2} g(r) J_{d/2-1/2}(tau r) dr at each tau > 0, for even d."""
    if d < 2 or d % 2 == 1:
        raise DimensionNotEven(f"descent needs an even d >= 2, got {d}")
    pq = pq_polynomials(d + 1)
    r = g.grid
    wg = radial_weights(r, d + 1) * g.values
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    dtype = complex if g.is_complex else float

    def _block(tb: np.ndarray) -> np.ndarray:
        return tb ** (-0.5 * (d + 1)) * (pq.kernel(np.outer(tb, r)) @ wg)

    return map_chunks(_block, tau, dtype=dtype, chunk=chunk_for(r.size, budget=2_000_000))


def inner_sonine_integral(g: SampledFunction, tau: float, d: int) -> complex:
    return inner_sonine_values(g, [tau], d)[0]


def characteristic_radius(g: SampledFunction) -> float:
    """Largest r with |g(r)| >= 1e-6 max |g|."""
    absval = np.abs(g.values)
    peak = float(np.max(absval))
    if peak == 0.0:
        return float(g.grid[-1])
    r = float(g.grid[np.flatnonzero(absval >= CHAR_LEVEL * peak)[-1]])
    return r if r > 0.0 else float(g.grid[-1])


def odd_taylor_terms(g: SampledFunction) -> Tuple[complex, complex]:
    """(g'(0), g'''(0)/6) from a polynomial fit to the first samples.

    Zero when the grid does not start at 0 or is too short to fit.
    """
    n = min(KINK_FIT_POINTS, g.grid.size)
    if g.grid[0] != 0.0 or n <= KINK_FIT_DEGREE:
        return 0.0, 0.0
    r = g.grid[:n]
    v = g.values[:n]

    def _fit(y: np.ndarray) -> np.ndarray:
        return np.polynomial.polynomial.polyfit(r, y, KINK_FIT_DEGREE)

    coef = _fit(v.real) + 1j * _fit(v.imag) if np.iscomplexobj(v) else _fit(v)
    return coef[1], coef[3]


def exp_moment_transform(m: int, k: np.ndarray, d: int) -> np.ndarray:
    """Fourier transform on R^d of r^m e^{-r} for m in {0, 1, 3} at angular k.

    Derivatives in b of c b (b^2 + |xi|^2)^{-(d+1)/2}, the transform of
    e^{-2 pi b |x|}, taken at b = 1 / (2 pi).
    """
    k = np.asarray(k, dtype=float)
    p = 0.5 * (d + 1)
    c = gamma(p) / np.pi ** p
    b = 1.0 / (2.0 * np.pi)
    u = b * b + (k / (2.0 * np.pi)) ** 2
    if m == 0:
        return c * b * u ** (-p)
    if m == 1:
        d1 = u ** (-p) - 2.0 * p * b * b * u ** (-p - 1.0)
        return -c * d1 / (2.0 * np.pi)
    if m == 3:
        d3 = (
            -6.0 * p * u ** (-p - 1.0)
            + 24.0 * p * (p + 1.0) * b ** 2 * u ** (-p - 2.0)
            - 8.0 * p * (p + 1.0) * (p + 2.0) * b ** 4 * u ** (-p - 3.0)
        )
        return -c * d3 / (2.0 * np.pi) ** 3
    raise ValueError(f"no closed form for r^{m} e^(-r)")


def _kink_reference(g: SampledFunction) -> Tuple[np.ndarray, complex, complex]:
    """a r e^{-r} + b r^3 e^{-r} with the odd Taylor terms of g at 0.

    Returns (samples on g.grid, a, b).
    """
    g1, g3 = odd_taylor_terms(g)
    a = g1
    b = g3 - 0.5 * g1
    r = g.grid
    return (a * r + b * r ** 3) * np.exp(-r), a, b


def _descent_one(
    g: SampledFunction,
    k: float,
    d: int,
    r_char: float,
    half_periods: int,
    per_panel: int,
    levels: int,
    floor: float = 0.0,
) -> complex:
    u_end = float(np.arccosh(2.0))
    u, wu = gauss_legendre(0.0, u_end, HEAD_NODES)
    s_head = np.cosh(u)
    power = 1.5 - 0.5 * d
    # ds / sqrt(s^2 - 1) = du on the head
    head_terms = wu * s_head ** power * inner_sonine_values(g, k * s_head, d)
    head = np.sum(head_terms)

    step = np.pi / (k * r_char)
    edges = 2.0 + step * np.arange(half_periods + 1)
    s, ws = panel_rule(edges, per_panel)
    tail = s ** power / np.sqrt(s * s - 1.0) * inner_sonine_values(g, k * s, d)
    partials = np.concatenate([[0.0], cumulative_panels(tail, ws, per_panel)])

    def _avg(seq: np.ndarray) -> complex:
        re, _ = averaged_truncations(seq.real, levels)
        im, _ = averaged_truncations(seq.imag, levels) if np.iscomplexobj(seq) else (0.0, 0.0)
        return complex(re, im)

    value = head + _avg(partials)
    half = head + _avg(partials[: half_periods // 2 + 1])
    mass = float(np.sum(np.abs(head_terms)) + np.sum(np.abs(tail * ws)))
    scale = max(abs(value), mass, floor, np.finfo(float).tiny)
    if abs(value - half) > DESCENT_TOL * scale:
        raise TailNotConverged(
            f"descent s-integral at k={k:.4g}: truncations at R and R/2 differ by {abs(value - half):.3e}"
        )
    return value


def sonine_descent_transform(
    field: RadialField,
    xi: Sequence[float],
    units: Units = Units.CYCLIC,
    half_periods: Optional[int] = None,
    panel_nodes: Optional[int] = None,
) -> SampledFunction:
    """psi^ for even d from the (d+1)-dimensional closed form and a Sonine integral over s >= 1.

    Odd Taylor terms of g at 0 make the s-integrand decay like a power
    without oscillating. They are moved into ``_kink_reference``, whose
    transform is closed form, and the descent runs on the remainder.
    """
    _check_dim(field.d)
    d = field.d
    if d % 2 == 1:
        raise DimensionNotEven(f"descent route needs even d, got {d}")
    settings = get_settings()
    half_periods = half_periods or settings.sonine_half_periods
    per_panel = panel_nodes or settings.sonine_panel_nodes
    levels = settings.sonine_averaging_levels
    g = field.profile
    check_moment_tail(g.grid, g.values, 0.5 * (d - 1), "radial transform")
    c = calibrate_sonine_constant(0.5 * d - 0.5, -0.5)
    reference, a, b = _kink_reference(g)
    smooth = SampledFunction(grid=g.grid, values=g.values - reference)
    r_char = characteristic_radius(g)
    k = _angular(xi, units)
    origin = _at_origin(field, radial_weights(g.grid, d))
    out = np.empty(k.size, dtype=complex)
    for i, kk in enumerate(k):
        if kk == 0.0:
            out[i] = origin
            continue
        factor = (2.0 * np.pi) ** (0.5 * d) * c * kk ** (1.5 - 0.5 * d)
        # convergence is judged against the size of psi^(0)
        floor = abs(origin) / abs(factor)
        out[i] = factor * _descent_one(smooth, kk, d, r_char, half_periods, per_panel, levels, floor)
    nonzero = k != 0.0
    out[nonzero] += a * exp_moment_transform(1, k[nonzero], d) + b * exp_moment_transform(3, k[nonzero], d)
    logger.debug(
        f"Descent transform d={d} at {k.size} frequencies, r_char={r_char:.4g}, c={c:.12g}, "
        f"kink terms a={a:.4g} b={b:.4g}"
    )
    if not g.is_complex:
        out = out.real
    return _result(xi, out)
