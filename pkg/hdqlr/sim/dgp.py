# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Threshold-crossing simulation design with a binary instrument.

Draw order for one dataset (all from the stream ``(seed, DGP[, replication])``):

1. ``E`` standard normal of shape (dim_x, n), transposed; ``X = E @ L.T`` with
   ``L`` the Cholesky factor of the Toeplitz matrix ``u^|j-k|``.
2. ``delta`` standard normal (n).
3. ``eps`` standard normal (n).
4. Only for ``instrument='independent'``: uniforms (n), ``Z = 1{U < 1/2}``.

Potential treatments are ``D(0) = 1{Phi(delta) < p_at}`` and
``D(1) = 1{Phi(delta) < 1 - p_nt}``, the realized treatment is
``D = D(Z)``, and ``Y = D + x_1 + eps`` (or ``D + sum(X) + eps``), so the
effect of treatment is 1 for every unit.

With ``instrument='latent_sign'`` the instrument is ``Z = 1{delta >= 0}``.
Z is then a function of the compliance latent, and E[D | Z] moves by
``1 - 2 (p_at + p_nt)`` rather than the complier share; at
``p_at = p_nt = 0.25`` the instrument carries no first stage at all.
``instrument='independent'`` draws Z independently of delta, making the
first stage equal to the complier share ``1 - p_at - p_nt``.
'''

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import logit
from scipy.stats import norm

from hdqlr import rng
from hdqlr.data import Dataset
from hdqlr.dml import NuisanceFit
from hdqlr.errors import ConfigurationError

logger = logging.getLogger(__name__)

OUTCOMES = ('first', 'sum')
INSTRUMENTS = ('latent_sign', 'independent')

# (p_at, p_nt) of the three identification regimes; complier shares 0.5, 0.1, 0.02
DESIGNS = {
    'strong': (0.25, 0.25),
    'weak': (0.45, 0.45),
    'unidentified': (0.49, 0.49)
}

PROBABILITY_CLIP = 1e-12


@dataclass(frozen=True)
class DgpConfig:
    n: int
    dim_x: int
    p_at: float
    p_nt: float
    u: float = 0.5
    seed: int = 0
    outcome: str = 'first'
    instrument: str = 'latent_sign'

    def __post_init__(self):
        if self.n < 10:
            raise ConfigurationError(f'n must be >= 10, got {self.n}')
        if self.dim_x < 1:
            raise ConfigurationError(f'dim_x must be >= 1, got {self.dim_x}')
        for name in ('p_at', 'p_nt'):
            value = getattr(self, name)
            if not 0.0 <= value < 0.5:
                raise ConfigurationError(f'{name} must lie in [0, 0.5), got {value}')
        if not self.p_at + self.p_nt < 1.0:
            raise ConfigurationError('p_at + p_nt must be < 1')
        if not -1.0 < self.u < 1.0:
            raise ConfigurationError(f'u must lie in (-1, 1), got {self.u}')
        if self.seed < 0:
            raise ConfigurationError(f'seed must be non-negative, got {self.seed}')
        if self.outcome not in OUTCOMES:
            raise ConfigurationError(f'outcome must be one of {OUTCOMES}, got {self.outcome!r}')
        if self.instrument not in INSTRUMENTS:
            raise ConfigurationError(f'instrument must be one of {INSTRUMENTS}, got {self.instrument!r}')

    @classmethod
    def from_design(cls, design, n, dim_x, **kwargs):
        try:
            p_at, p_nt = DESIGNS[design]
        except KeyError:
            raise ConfigurationError(f'unknown design {design!r}, '
                                     f'expected one of {sorted(DESIGNS)}') from None
        return cls(n=n, dim_x=dim_x, p_at=p_at, p_nt=p_nt, **kwargs)

    @property
    def complier_share(self):
        return 1.0 - self.p_at - self.p_nt

    def design_id(self):
        return (f'n{self.n}-p{self.dim_x}-at{self.p_at:g}-nt{self.p_nt:g}-u{self.u:g}'
                f'-{self.outcome}-{self.instrument}')


@dataclass(frozen=True, eq=False)
class Simulation:
    '''A simulated dataset with its potential outcomes.'''
    dataset: Dataset
    d0: np.ndarray
    d1: np.ndarray
    y0: np.ndarray
    y1: np.ndarray

    @property
    def complier(self):
        return (self.d1 == 1.0) & (self.d0 == 0.0)

    def complier_share(self):
        return float(np.mean(self.complier))

    def complier_effect(self):
        '''Mean of Y(1) - Y(0) among compliers (NaN when there are none).'''
        mask = self.complier
        if not mask.any():
            return float('nan')
        return float(np.mean(self.y1[mask] - self.y0[mask]))


def toeplitz_factor(dim_x, u):
    '''Lower Cholesky factor of the covariance with entries ``u^|j-k|``.'''
    sigma = scipy.linalg.toeplitz(u ** np.arange(dim_x))
    return scipy.linalg.cholesky(sigma, lower=True)


def simulate(cfg, replication=None):
    stream = (rng.DGP,) if replication is None else (rng.DGP, replication)
    gen = rng.make_rng(cfg.seed, *stream)
    n, p = cfg.n, cfg.dim_x

    x = gen.standard_normal((p, n)).T @ toeplitz_factor(p, cfg.u).T
    delta = gen.standard_normal(n)
    eps = gen.standard_normal(n)
    if cfg.instrument == 'independent':
        z = (gen.random(n) < 0.5).astype(np.float64)
    else:
        z = (delta >= 0.0).astype(np.float64)

    latent = norm.cdf(delta)
    d0 = (latent < cfg.p_at).astype(np.float64)
    d1 = (latent < 1.0 - cfg.p_nt).astype(np.float64)
    assert np.all(d1 >= d0), 'monotonicity violated'
    d = d0 * (1.0 - z) + d1 * z

    confounder = x[:, 0] if cfg.outcome == 'first' else x.sum(axis=1)
    y0 = confounder + eps
    y1 = 1.0 + confounder + eps
    y = d * y1 + (1.0 - d) * y0

    names = tuple(f'x{j}' for j in range(1, p + 1))
    ds = Dataset(y=y, d=d, z=z, x=x, column_names=names)
    return Simulation(dataset=ds, d0=d0, d1=d1, y0=y0, y1=y1)


def generate(cfg, replication=None):
    return simulate(cfg, replication).dataset


def _clipped_logit(prob):
    return float(logit(np.clip(prob, PROBABILITY_CLIP, 1.0 - PROBABILITY_CLIP)))


def true_nuisance(cfg, clip_epsilon=0.01):
    '''Population nuisances of ``cfg`` in the score's parameterization.'''
    if cfg.instrument == 'independent':
        m1, m0 = 1.0 - cfg.p_nt, cfg.p_at
    else:
        m1, m0 = 1.0 - 2.0 * cfg.p_nt, 2.0 * cfg.p_at
    beta22 = np.zeros(cfg.dim_x)
    if cfg.outcome == 'first':
        beta22[0] = 1.0
    else:
        beta22[:] = 1.0
    first = _clipped_logit(m0)
    return NuisanceFit(beta11=_clipped_logit(m1) - first, beta12=np.zeros(cfg.dim_x),
                       beta21=m1 - m0, beta22=beta22, gamma=np.zeros(cfg.dim_x),
                       clip_epsilon=clip_epsilon, intercept_first=first, intercept_reduced=m0)
