# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import logging
from dataclasses import dataclass

import numpy as np

from hdqlr.errors import ConfigurationError, DegenerateVarianceError, WeakIdentificationError
from hdqlr.inference.estimate import dml_from_crossfits

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 401
DEFAULT_HALF_WIDTH = 20.0


@dataclass(frozen=True, eq=False)
class ThetaGrid:
    '''Uniform grid over the compact parameter set [lo, hi], endpoints included.'''
    lo: float
    hi: float
    points: int
    values: np.ndarray

    @classmethod
    def uniform(cls, lo, hi, points=DEFAULT_POINTS):
        if not lo < hi:
            raise ConfigurationError(f'grid needs lo < hi, got [{lo}, {hi}]')
        if points < 2:
            raise ConfigurationError(f'grid needs at least 2 points, got {points}')
        values = np.linspace(lo, hi, points)
        values.setflags(write=False)
        return cls(lo=float(lo), hi=float(hi), points=int(points), values=values)

    @classmethod
    def from_spec(cls, spec):
        return cls.uniform(spec.lo, spec.hi, spec.points)

    def to_dict(self):
        return {'lo': self.lo, 'hi': self.hi, 'points': self.points}


def default_grid(estimate, points=DEFAULT_POINTS, half_width=DEFAULT_HALF_WIDTH):
    '''``theta_hat +/- half_width * se`` from a DML estimate.'''
    span = half_width * estimate.std_error
    return ThetaGrid.uniform(estimate.theta_hat - span, estimate.theta_hat + span, points)


def resolve_grid(cfg, crossfits):
    if cfg.grid is not None:
        return ThetaGrid.from_spec(cfg.grid)
    try:
        estimate = dml_from_crossfits(crossfits, cfg.alpha)
    except (WeakIdentificationError, DegenerateVarianceError) as e:
        raise ConfigurationError(f'no default parameter grid: {e}; pass an explicit grid') from e
    grid = default_grid(estimate)
    logger.info(f'parameter grid [{grid.lo:.6g}, {grid.hi:.6g}] with {grid.points} points '
                'centred on the DML estimate')
    return grid
