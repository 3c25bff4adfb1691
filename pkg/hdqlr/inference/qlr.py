# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Conditional quasi-likelihood-ratio statistic and its critical value.

Given the kernel moments of a cross-fit and a hypothesized theta0,

    h(theta) = q(theta) - omega(theta, theta0) / omega00 * q(theta0)
    R(xi)    = xi^2 / omega00
               - inf_theta (omega(theta, theta0) / omega00 * xi + h(theta))^2 / omega(theta, theta)

with omega00 = omega(theta0, theta0). The critical value is the (1 - alpha)
quantile of R(xi*) for xi* ~ N(0, omega00), which conditions on h.

The numerator inside the infimum is the square of a linear form
L(theta) = a theta + b and the denominator is the quadratic
Q(theta) = c theta^2 + d theta + e, so the infimum over an interval is
attained at L's root, at the single stationary point of L^2 / Q away from
that root, or at an endpoint. theta0 is always a candidate and is valued at
exactly xi^2 / omega00, which keeps R >= 0 in floating point.
'''

import logging
import math

import numpy as np

from hdqlr import rng
from hdqlr.dml import omega, q_hat
from hdqlr.errors import ConfigurationError, DegenerateVarianceError

logger = logging.getLogger(__name__)

VAR_FLOOR = 1e-12
EXACT = 'exact'
GRID = 'grid'


def null_variance(moments, theta0, var_floor=VAR_FLOOR):
    value = omega(moments, theta0, theta0)
    if not value > var_floor:
        raise DegenerateVarianceError(f'score variance {value:.3g} at theta0={theta0} is below {var_floor}')
    return value


def h_process(moments, theta0, theta, var_floor=VAR_FLOOR):
    w00 = null_variance(moments, theta0, var_floor)
    theta = np.asarray(theta, dtype=np.float64)
    value = q_hat(moments, theta) - omega(moments, theta, theta0) / w00 * q_hat(moments, theta0)
    value = np.where(theta == theta0, 0.0, value)
    return float(value) if value.ndim == 0 else value


def _min_variance(moments, lo, hi):
    points = [lo, hi]
    if moments.c_aa > 0.0:
        vertex = -moments.c_ab / moments.c_aa
        if lo < vertex < hi:
            points.append(vertex)
    return min(omega(moments, t, t) for t in points)


def _linear_form(moments, theta0, xi, w00):
    '''Coefficients (a, b) of L(theta) = a theta + b, vectorized over xi.'''
    root_n = math.sqrt(moments.n)
    shift = (xi - q_hat(moments, theta0)) / w00
    slope = theta0 * moments.c_aa + moments.c_ab
    level = theta0 * moments.c_ab + moments.c_bb
    return slope * shift + root_n * moments.mean_a, level * shift + root_n * moments.mean_b


def _exact_candidates(moments, a, b, lo, hi):
    c, d, e = moments.c_aa, 2.0 * moments.c_ab, moments.c_bb
    with np.errstate(divide='ignore', invalid='ignore'):
        root = -b / a
        stationary = -(2.0 * a * e - b * d) / (a * d - 2.0 * b * c)
    candidates = np.column_stack([root, stationary, np.full_like(a, lo), np.full_like(a, hi)])
    candidates = np.where(np.isfinite(candidates), candidates, lo)
    return np.clip(candidates, lo, hi)


def r_statistic(xi, moments, theta0, grid, inner=EXACT, var_floor=VAR_FLOOR):
    '''Conditional statistic for one xi or an array of them.

    ``inner='exact'`` takes the infimum over the interval [grid.lo, grid.hi];
    ``inner='grid'`` restricts it to the grid values. Both include theta0.
    '''
    w00 = null_variance(moments, theta0, var_floor)
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    a, b = _linear_form(moments, theta0, xi_arr, w00)

    if inner == EXACT:
        if not _min_variance(moments, grid.lo, grid.hi) > var_floor:
            raise DegenerateVarianceError(f'score variance falls below {var_floor} on '
                                          f'[{grid.lo:.6g}, {grid.hi:.6g}]')
        thetas = _exact_candidates(moments, a, b, grid.lo, grid.hi)
    elif inner == GRID:
        variances = omega(moments, grid.values, grid.values)
        if not variances.min() > var_floor:
            raise DegenerateVarianceError(f'score variance falls below {var_floor} on the grid')
        thetas = np.broadcast_to(grid.values, (len(xi_arr), grid.points))
    else:
        raise ConfigurationError(f'inner must be {EXACT!r} or {GRID!r}, got {inner!r}')

    linear = a[:, None] * thetas + b[:, None]
    objective = linear ** 2 / omega(moments, thetas, thetas)
    at_null = xi_arr ** 2 / w00
    infimum = np.minimum(objective.min(axis=1), at_null)
    value = at_null - infimum
    return float(value[0]) if np.ndim(xi) == 0 else value


def quantile_index(alpha, draws):
    '''0-based position of the ceiling order statistic ceil((1 - alpha) M).'''
    return max(math.ceil((1.0 - alpha) * draws - 1e-9), 1) - 1


def simulated_draws(moments, theta0, draws, seed, var_floor=VAR_FLOOR):
    '''xi* ~ N(0, omega00) from the stream keyed by seed and the bits of theta0.'''
    w00 = null_variance(moments, theta0, var_floor)
    gen = rng.make_rng(seed, rng.CRITICAL_DRAWS, rng.theta_key(theta0))
    return gen.normal(0.0, math.sqrt(w00), size=draws)


def critical_value(moments, theta0, grid, alpha, draws, seed, inner=EXACT, var_floor=VAR_FLOOR):
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f'alpha must lie in (0, 1), got {alpha}')
    if draws < 100:
        raise ConfigurationError(f'critical values need at least 100 draws, got {draws}')
    xi = simulated_draws(moments, theta0, draws, seed, var_floor)
    stats = np.sort(r_statistic(xi, moments, theta0, grid, inner, var_floor))
    return float(stats[quantile_index(alpha, draws)])
