# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Double machine learning point estimate of the LATE and its normal-approximation interval.'''

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.stats import norm

from hdqlr.dml import point_estimate
from hdqlr.errors import DegenerateVarianceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DmlEstimate:
    theta_hat: float
    std_error: float
    ci: Tuple[float, float]
    alpha: float
    reps: int = 1
    method: str = 'dml'

    def to_dict(self):
        return {'method': self.method, 'theta_hat': self.theta_hat, 'std_error': self.std_error,
                'ci': list(self.ci), 'alpha': self.alpha, 'reps': self.reps}


def _single(scores):
    theta = point_estimate(scores)
    psi = scores.psi(theta)
    variance = float(np.mean(psi ** 2) / np.mean(scores.psi_a) ** 2 / scores.n)
    return theta, variance


def dml_from_crossfits(crossfits, alpha, method='dml'):
    '''Estimate from one or more cross-fits.

    Several repetitions are combined by the mean estimate with variance
    ``mean(var_r + (theta_r - theta_bar)^2)``.
    '''
    pairs = [_single(cf.scores) for cf in crossfits]
    thetas = np.array([t for t, _ in pairs])
    variances = np.array([v for _, v in pairs])
    theta_bar = float(np.mean(thetas))
    variance = float(np.mean(variances + (thetas - theta_bar) ** 2))
    if not variance > 0.0 or not math.isfinite(variance):
        raise DegenerateVarianceError(f'DML variance estimate {variance:.3g} is not positive')
    se = math.sqrt(variance)
    z = float(norm.ppf(1.0 - alpha / 2.0))
    logger.debug(f'{method}: theta_hat={theta_bar:.6g} se={se:.3g} over {len(crossfits)} repetitions')
    return DmlEstimate(theta_hat=theta_bar, std_error=se, ci=(theta_bar - z * se, theta_bar + z * se),
                       alpha=alpha, reps=len(crossfits), method=method)
