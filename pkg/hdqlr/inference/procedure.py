# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Identification-robust test of H0: LATE = theta0 and its inversion into a confidence region.

Each cross-fit repetition yields an observed statistic and a simulated
critical value; the repetitions are combined by averaging both, and the
test rejects when the averaged statistic exceeds the averaged critical
value. The confidence region collects the grid points the test does not
reject, with the same cross-fits and random streams, so a grid point is
accepted exactly when ``test`` at that point accepts.
'''

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from hdqlr import rng
from hdqlr.dml import omega, q_hat, repeat_crossfit
from hdqlr.inference.grid import ThetaGrid, resolve_grid
from hdqlr.inference.qlr import critical_value, r_statistic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False

    theta0: float
    statistic: float
    critical_value: float
    alpha: float
    reject: bool
    draws_used: int
    seed: int
    method: str = 'hdqlr'
    per_rep: Tuple[dict, ...] = ()

    def to_dict(self):
        return {'method': self.method, 'theta0': self.theta0, 'statistic': self.statistic,
                'critical_value': self.critical_value, 'alpha': self.alpha, 'reject': self.reject,
                'draws_used': self.draws_used, 'seed': self.seed, 'per_rep': list(self.per_rep)}


@dataclass(frozen=True, eq=False)
class ConfidenceRegion:
    alpha: float
    grid: ThetaGrid
    accepted: np.ndarray
    intervals: List[Tuple[float, float]]
    length: float
    per_rep: Tuple[dict, ...] = ()
    method: str = 'hdqlr'
    union_fallback: bool = False
    estimate: Optional[dict] = field(default=None)

    @property
    def empty(self):
        return len(self.intervals) == 0

    def to_dict(self):
        data = {'method': self.method, 'alpha': self.alpha,
                'intervals': [[lo, hi] for lo, hi in self.intervals], 'length': self.length,
                'empty': self.empty, 'union_fallback': self.union_fallback, 'grid': self.grid.to_dict(),
                'accepted_points': int(np.count_nonzero(self.accepted)), 'per_rep': list(self.per_rep)}
        if self.estimate is not None:
            data['estimate'] = self.estimate
        return data


def accepted_runs(values, accepted):
    '''Maximal runs of accepted grid points as ``(lo, hi)`` pairs.'''
    runs = []
    start = None
    for i, ok in enumerate(accepted):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            runs.append((float(values[start]), float(values[i - 1])))
            start = None
    if start is not None:
        runs.append((float(values[start]), float(values[-1])))
    return runs


def total_length(intervals):
    return float(sum(hi - lo for lo, hi in intervals))


def merge_intervals(intervals):
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def aggregate_intervals(per_rep_intervals):
    '''Average endpoints per component when every repetition has the same
    number of components; otherwise report the union. Returns
    ``(intervals, union_fallback)``.'''
    counts = {len(ivs) for ivs in per_rep_intervals}
    if len(counts) == 1:
        count = counts.pop()
        if count == 0:
            return [], False
        stacked = np.array(per_rep_intervals, dtype=np.float64)
        means = stacked.mean(axis=0)
        return [(float(lo), float(hi)) for lo, hi in means], False
    logger.warning(f'repetitions disagree on the number of accepted components {sorted(counts)}; '
                   'reporting their union')
    return merge_intervals([iv for ivs in per_rep_intervals for iv in ivs]), True


def observed_xi(crossfit, theta0, statistic):
    moments = crossfit.moments
    if statistic == 'simulated':
        gen = rng.make_rng(crossfit.seed, rng.SIMULATED_STATISTIC, rng.theta_key(theta0))
        return float(gen.normal(0.0, math.sqrt(omega(moments, theta0, theta0))))
    return q_hat(moments, theta0)


def _rep_decision(crossfit, theta0, grid, cfg):
    xi = observed_xi(crossfit, theta0, cfg.statistic)
    stat = r_statistic(xi, crossfit.moments, theta0, grid, cfg.inner)
    crit = critical_value(crossfit.moments, theta0, grid, cfg.alpha, cfg.draws, crossfit.seed, cfg.inner)
    return stat, crit


def decide_from_crossfits(crossfits, theta0, grid, cfg, method=None):
    '''Aggregated conditional test at ``theta0`` over already computed cross-fits.'''
    theta0 = float(theta0)
    pairs = [_rep_decision(cf, theta0, grid, cfg) for cf in crossfits]
    stats = np.array([s for s, _ in pairs])
    crits = np.array([c for _, c in pairs])
    statistic = float(np.mean(stats))
    crit = float(np.mean(crits))
    per_rep = tuple({'seed': cf.seed, 'statistic': float(s), 'critical_value': float(c),
                     'reject': bool(s > c)}
                    for cf, s, c in zip(crossfits, stats, crits))
    return TestOutcome(theta0=theta0, statistic=statistic, critical_value=crit, alpha=cfg.alpha,
                       reject=bool(statistic > crit), draws_used=cfg.draws, seed=cfg.seed,
                       method=method or cfg.method, per_rep=per_rep)


def conditional_config(cfg):
    '''Resolve the cross-fitting settings of the conditional methods.

    AM16 is the conditional test with unpenalized nuisances fit once on the
    full sample.
    '''
    if cfg.method == 'am16':
        return cfg.replace(k_folds=1, lambda_scale=0.0, reps=1)
    return cfg


def crossfits_for(ds, cfg):
    return repeat_crossfit(ds, cfg.k_folds, cfg.lambda_scale, cfg.reps, cfg.seed, n_jobs=cfg.n_jobs,
                           clip_epsilon=cfg.clip_epsilon, standardize=cfg.standardize,
                           unpenalized_intercept=cfg.unpenalized_intercept)


def test(ds, theta0, cfg):
    cfg = conditional_config(cfg.resolved('test'))
    crossfits = crossfits_for(ds, cfg)
    grid = resolve_grid(cfg, crossfits)
    outcome = decide_from_crossfits(crossfits, theta0, grid, cfg)
    logger.info(f'{outcome.method} test of theta0={outcome.theta0:g}: R={outcome.statistic:.4g} '
                f'c={outcome.critical_value:.4g} reject={outcome.reject}')
    return outcome


def region_from_crossfits(crossfits, grid, cfg, method=None):
    outcomes = Parallel(n_jobs=cfg.n_jobs, prefer='threads')(
        delayed(decide_from_crossfits)(crossfits, theta, grid, cfg, method) for theta in grid.values)
    accepted = np.array([not o.reject for o in outcomes])
    per_rep_intervals = []
    per_rep = []
    for r, cf in enumerate(crossfits):
        rep_accepted = [not o.per_rep[r]['reject'] for o in outcomes]
        intervals = accepted_runs(grid.values, rep_accepted)
        per_rep_intervals.append(intervals)
        per_rep.append({'seed': cf.seed, 'intervals': [[lo, hi] for lo, hi in intervals],
                        'length': total_length(intervals)})
    intervals, union = aggregate_intervals(per_rep_intervals)
    if not intervals:
        logger.warning('every grid point was rejected; the confidence region is empty')
    return ConfidenceRegion(alpha=cfg.alpha, grid=grid, accepted=accepted, intervals=intervals,
                            length=total_length(intervals), per_rep=tuple(per_rep),
                            method=method or cfg.method, union_fallback=union)


def confidence_interval(ds, cfg):
    cfg = conditional_config(cfg.resolved('ci'))
    crossfits = crossfits_for(ds, cfg)
    grid = resolve_grid(cfg, crossfits)
    region = region_from_crossfits(crossfits, grid, cfg)
    logger.info(f'{region.method} region at level {1.0 - cfg.alpha:g}: {region.intervals} '
                f'(length {region.length:.4g})')
    return region
