# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''AR-type Neyman orthogonal score for the LATE, in linear form

    psi(W; theta, eta) = psi_a(W; eta) * theta + psi_b(W; eta)

with nuisances parameterized as

    m(z, X) = Lambda(a_1 + z * beta11 + X'beta12)     first stage
    g(z, X) = a_2 + z * beta21 + X'beta22             reduced form
    p(X)    = Lambda(a_3 + X'gamma)                   instrument propensity

where Lambda is the logistic CDF and the intercepts a_k are zero unless an
unpenalized intercept was requested.
'''

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from hdqlr.errors import ConfigurationError, WeakIdentificationError

logger = logging.getLogger(__name__)

DEFAULT_CLIP_EPSILON = 0.01
WEAK_DENOMINATOR = 1e-12


@dataclass(frozen=True, eq=False)
class NuisanceFit:
    beta11: float
    beta12: np.ndarray
    beta21: float
    beta22: np.ndarray
    gamma: np.ndarray
    clip_epsilon: float = DEFAULT_CLIP_EPSILON
    intercept_first: float = 0.0
    intercept_reduced: float = 0.0
    intercept_propensity: float = 0.0

    def __post_init__(self):
        for name in ('beta12', 'beta22', 'gamma'):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if not 0.0 < self.clip_epsilon < 0.5:
            raise ConfigurationError(f'clip_epsilon must lie in (0, 0.5), got {self.clip_epsilon}')
        if not (len(self.beta12) == len(self.beta22) == len(self.gamma)):
            raise ConfigurationError('nuisance coefficient vectors differ in length')
        scalars = np.array([self.beta11, self.beta21, self.intercept_first,
                            self.intercept_reduced, self.intercept_propensity])
        vectors = np.concatenate([self.beta12, self.beta22, self.gamma])
        if not (np.isfinite(scalars).all() and np.isfinite(vectors).all()):
            raise ConfigurationError('nuisance coefficients must be finite')

    @property
    def p(self):
        return len(self.gamma)

    def support_sizes(self):
        return {
            'first_stage': int(np.count_nonzero(self.beta12)) + int(self.beta11 != 0.0),
            'reduced_form': int(np.count_nonzero(self.beta22)) + int(self.beta21 != 0.0),
            'propensity': int(np.count_nonzero(self.gamma))
        }


@dataclass(frozen=True, eq=False)
class ScoreDecomposition:
    psi_a: np.ndarray
    psi_b: np.ndarray
    fold_of: np.ndarray

    def __post_init__(self):
        if not (len(self.psi_a) == len(self.psi_b) == len(self.fold_of)):
            raise ConfigurationError('score components differ in length')

    @property
    def n(self):
        return len(self.psi_a)

    def psi(self, theta):
        return self.psi_a * theta + self.psi_b


def evaluate_score(ds, fit, rows=None, fold=1):
    '''Score components for ``rows`` of ``ds`` (all rows by default) under ``fit``.

    The fitted propensity is clipped to [eps, 1 - eps]; values already
    inside the interval pass through unchanged.
    '''
    if fit.p != ds.p:
        raise ConfigurationError(f'nuisance fit has {fit.p} covariates, dataset has {ds.p}')
    rows = np.arange(ds.n) if rows is None else np.asarray(rows)
    x, y, d, z = ds.x[rows], ds.y[rows], ds.d[rows], ds.z[rows]
    eps = fit.clip_epsilon

    raw = expit(fit.intercept_propensity + x @ fit.gamma)
    clipped = (raw < eps) | (raw > 1.0 - eps)
    if clipped.any():
        logger.debug(f'clipped {int(clipped.sum())} of {len(rows)} propensities to [{eps}, {1.0 - eps}]')
    prop = np.clip(raw, eps, 1.0 - eps)

    first = fit.intercept_first + x @ fit.beta12
    m1 = expit(first + fit.beta11)
    m0 = expit(first)
    g0 = fit.intercept_reduced + x @ fit.beta22
    g1 = g0 + fit.beta21

    psi_b = (g1 - g0) + z * (y - g1) / prop - (1.0 - z) * (y - g0) / (1.0 - prop)
    psi_a = -((m1 - m0) + z * (d - m1) / prop - (1.0 - z) * (d - m0) / (1.0 - prop))

    bad = ~(np.isfinite(psi_a) & np.isfinite(psi_b))
    assert not bad.any(), f'non-finite score at rows {rows[bad][:10]}'
    return ScoreDecomposition(psi_a=psi_a, psi_b=psi_b, fold_of=np.full(len(rows), fold, dtype=np.int64))


def late_point_estimand(ds, fit):
    '''ITT over compliance: mean(psi_b) / mean(-psi_a).'''
    return point_estimate(evaluate_score(ds, fit))


def point_estimate(scores):
    denominator = -np.mean(scores.psi_a)
    if abs(denominator) < WEAK_DENOMINATOR:
        raise WeakIdentificationError(
            f'compliance estimate {denominator:.3g} is numerically zero; the LATE is not point '
            'identified here, invert the conditional test instead')
    return float(np.mean(scores.psi_b) / denominator)
