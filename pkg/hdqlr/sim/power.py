# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Monte Carlo rejection frequencies over a range of hypothesized values.

Replication r simulates its dataset from stream ``(design.seed, DGP, r)``
and runs inference with seed drawn from ``(cfg.seed, REPLICATION, r)``, so
any replication can be rerun on its own and the result does not depend on
``n_jobs``. Within a replication, methods that share cross-fitting
settings share the cross-fits.
'''

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from hdqlr import rng
from hdqlr.config import METHODS
from hdqlr.errors import ConfigurationError, HdqlrError, PowerExperimentError
from hdqlr.inference.grid import resolve_grid
from hdqlr.inference.methods import CONDITIONAL, crossfit_key, decide, method_config
from hdqlr.inference.procedure import crossfits_for
from hdqlr.sim.dgp import DgpConfig, generate

logger = logging.getLogger(__name__)

MAX_FAILURE_SHARE = 0.01


@dataclass(frozen=True, eq=False)
class PowerCurve:
    theta_values: np.ndarray
    rejection_rate: Dict[str, np.ndarray]
    reps: int
    alpha: float
    design: DgpConfig
    failures: Dict[str, int] = field(default_factory=dict)
    methods: Tuple[str, ...] = ()

    def completed(self, method):
        return self.reps - self.failures.get(method, 0)

    def to_frame(self):
        design_id = self.design.design_id()
        rows = [{'theta': float(theta), 'method': method, 'rate': float(rate),
                 'reps': self.completed(method), 'design_id': design_id}
                for method in self.methods
                for theta, rate in zip(self.theta_values, self.rejection_rate[method])]
        return pd.DataFrame(rows, columns=['theta', 'method', 'rate', 'reps', 'design_id'])

    def to_csv(self, path_or_buffer):
        self.to_frame().to_csv(path_or_buffer, index=False, float_format='%.17g')


def replication_seed(seed, replication):
    return int(rng.make_rng(seed, rng.REPLICATION, replication).integers(0, 2 ** 31))


def _replication(design, methods, theta_values, cfg, replication):
    '''Reject flags per method for one replication; failures map to the error text.'''
    ds = generate(design, replication)
    base = cfg.replace(seed=replication_seed(cfg.seed, replication), n_jobs=1)
    crossfits, grids, results = {}, {}, {}
    for method in methods:
        mcfg = method_config(base, method)
        key = crossfit_key(mcfg)
        try:
            if key not in crossfits:
                crossfits[key] = crossfits_for(ds, mcfg)
            grid = None
            if method in CONDITIONAL:
                if key not in grids:
                    grids[key] = resolve_grid(mcfg, crossfits[key])
                grid = grids[key]
            results[method] = np.array([decide(mcfg, crossfits[key], theta, grid).reject
                                        for theta in theta_values])
        except HdqlrError as e:
            logger.debug(f'replication {replication}, {method}: {type(e).__name__}: {e}')
            results[method] = f'{type(e).__name__}: {e}'
    return results


def power_experiment(design, methods, theta_values, reps, cfg, alpha=None):
    '''Rejection frequency of each method at each value of ``theta_values``.

    Failed replications are excluded per method; a method failing in 1% of
    replications or more aborts the experiment.
    '''
    methods = tuple(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise ConfigurationError(f'methods must be a non-empty subset of {METHODS}, got {list(methods)}')
    if reps < 1:
        raise ConfigurationError(f'reps must be >= 1, got {reps}')
    theta_values = np.asarray(theta_values, dtype=np.float64)
    if theta_values.ndim != 1 or len(theta_values) == 0:
        raise ConfigurationError('theta_values must be a non-empty vector')
    cfg = cfg.resolved('test')
    if alpha is not None:
        cfg = cfg.replace(alpha=alpha)
    if not np.any(theta_values == 1.0):
        logger.warning('theta_values does not contain the true value 1; no size estimate')
    if reps < 50:
        logger.info(f'{reps} replications are too few for reporting rejection rates')

    outcomes = Parallel(n_jobs=cfg.n_jobs, prefer='threads')(
        delayed(_replication)(design, methods, theta_values, cfg, r) for r in range(reps))

    rates, failures = {}, {}
    for method in methods:
        flags = [o[method] for o in outcomes if not isinstance(o[method], str)]
        failed = [o[method] for o in outcomes if isinstance(o[method], str)]
        failures[method] = len(failed)
        if failed:
            logger.warning(f'{method}: excluded {len(failed)} of {reps} replications (first: {failed[0]})')
        if failed and len(failed) >= MAX_FAILURE_SHARE * reps:
            raise PowerExperimentError(f'{method} failed in {len(failed)} of {reps} replications; '
                                       f'first failure: {failed[0]}')
        rates[method] = np.mean(flags, axis=0)

    logger.info(f'power experiment {design.design_id()}: {reps} replications, methods {list(methods)}')
    return PowerCurve(theta_values=theta_values, rejection_rate=rates, reps=reps, alpha=cfg.alpha,
                      design=design, failures=failures, methods=methods)
