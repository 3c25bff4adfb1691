# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Comparison procedures for the conditional test.

* ``dml``: cross-fitted DML point estimate with a normal-approximation t-test.
* ``dml_nocf``: the same estimator with nuisances fit and scored on the full sample.
* ``am16``: the conditional test with unpenalized full-sample nuisances.
* ``ar``: the Anderson-Rubin statistic q(theta0)^2 / omega(theta0, theta0)
  against the chi-square(1) quantile.
'''

import logging

import numpy as np
from scipy.stats import chi2, norm

from hdqlr.dml import omega, q_hat
from hdqlr.errors import DegenerateVarianceError
from hdqlr.inference import procedure
from hdqlr.inference.estimate import dml_from_crossfits
from hdqlr.inference.procedure import (ConfidenceRegion, TestOutcome, accepted_runs, crossfits_for,
                                       total_length)
from hdqlr.inference.qlr import VAR_FLOOR, null_variance

logger = logging.getLogger(__name__)


def dml_config(cfg, crossfit):
    return cfg.resolved('test').replace(k_folds=cfg.k_folds if crossfit else 1)


def dml_estimate(ds, crossfit, cfg):
    '''DML estimate with cross-fitting (``dml``) or without (``dml_nocf``).'''
    cfg = dml_config(cfg, crossfit)
    method = 'dml' if crossfit else 'dml_nocf'
    estimate = dml_from_crossfits(crossfits_for(ds, cfg), cfg.alpha, method=method)
    logger.info(f'{method}: theta_hat={estimate.theta_hat:.6g} se={estimate.std_error:.4g}')
    return estimate


def dml_decision(estimate, theta0, seed=0):
    '''t-test of theta0 from a DML estimate.'''
    statistic = abs(estimate.theta_hat - theta0) / estimate.std_error
    crit = float(norm.ppf(1.0 - estimate.alpha / 2.0))
    return TestOutcome(theta0=float(theta0), statistic=float(statistic), critical_value=crit,
                       alpha=estimate.alpha, reject=bool(statistic > crit), draws_used=0, seed=seed,
                       method=estimate.method)


def dml_test(ds, theta0, cfg, crossfit=True):
    return dml_decision(dml_estimate(ds, crossfit, cfg), theta0, cfg.seed)


def dml_region(estimate, grid):
    '''Normal-approximation interval intersected with the parameter grid.'''
    lo, hi = max(estimate.ci[0], grid.lo), min(estimate.ci[1], grid.hi)
    intervals = [(float(lo), float(hi))] if lo <= hi else []
    if not intervals:
        logger.warning(f'{estimate.method} interval {estimate.ci} lies outside [{grid.lo}, {grid.hi}]')
    accepted = (grid.values >= lo) & (grid.values <= hi)
    return ConfidenceRegion(alpha=estimate.alpha, grid=grid, accepted=accepted, intervals=intervals,
                            length=total_length(intervals), method=estimate.method,
                            estimate=estimate.to_dict())


def ar_statistic(moments, theta0, var_floor=VAR_FLOOR):
    return q_hat(moments, theta0) ** 2 / null_variance(moments, theta0, var_floor)


def ar_decision(crossfits, theta0, alpha, seed=0):
    stats = np.array([ar_statistic(cf.moments, theta0) for cf in crossfits])
    crit = float(chi2.ppf(1.0 - alpha, df=1))
    statistic = float(np.mean(stats))
    per_rep = tuple({'seed': cf.seed, 'statistic': float(s), 'critical_value': crit,
                     'reject': bool(s > crit)} for cf, s in zip(crossfits, stats))
    return TestOutcome(theta0=float(theta0), statistic=statistic, critical_value=crit, alpha=alpha,
                       reject=bool(statistic > crit), draws_used=0, seed=seed, method='ar',
                       per_rep=per_rep)


def ar_test(ds, theta0, cfg):
    cfg = cfg.resolved('test')
    return ar_decision(crossfits_for(ds, cfg), theta0, cfg.alpha, cfg.seed)


def ar_region(crossfits, grid, alpha, var_floor=VAR_FLOOR):
    '''Closed-form inversion of the averaged AR statistic on the grid.'''
    crit = float(chi2.ppf(1.0 - alpha, df=1))
    stats = []
    for cf in crossfits:
        variances = omega(cf.moments, grid.values, grid.values)
        if not variances.min() > var_floor:
            raise DegenerateVarianceError(f'score variance falls below {var_floor} on the grid')
        stats.append(q_hat(cf.moments, grid.values) ** 2 / variances)
    accepted = ~(np.mean(stats, axis=0) > crit)
    intervals = accepted_runs(grid.values, accepted)
    return ConfidenceRegion(alpha=alpha, grid=grid, accepted=accepted, intervals=intervals,
                            length=total_length(intervals), method='ar')


def am16_test(ds, theta0, cfg):
    '''Conditional test with nuisances fit once by unpenalized logit and OLS on all rows.'''
    return procedure.test(ds, theta0, cfg.replace(method='am16'))
