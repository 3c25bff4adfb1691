# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''K-fold cross-fitting of the LATE score.

For each fold the nuisances are fit on the complement rows and the score is
evaluated on the fold's own rows with that fit. Because the score is linear
in theta, everything downstream inference needs is held in five pooled
scalars (``KernelMoments``): the covariance kernel

    omega(t1, t2) = t1 t2 c_aa + (t1 + t2) c_ab + c_bb

and the scaled score sum ``q_hat(t) = sqrt(N) (mean_a t + mean_b)``.
'''

import json
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from joblib import Parallel, delayed

from hdqlr.data import assign_folds, single_fold
from hdqlr.dml.nuisance import FitDiagnostics, fit_nuisance
from hdqlr.dml.score import DEFAULT_CLIP_EPSILON, NuisanceFit, ScoreDecomposition, evaluate_score
from hdqlr.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelMoments:
    mean_a: float
    mean_b: float
    c_aa: float
    c_ab: float
    c_bb: float
    n: int

    @classmethod
    def from_scores(cls, scores):
        '''Pooled means and population (1/N) covariances of the score components.'''
        a = scores.psi_a - np.mean(scores.psi_a)
        b = scores.psi_b - np.mean(scores.psi_b)
        return cls(mean_a=float(np.mean(scores.psi_a)), mean_b=float(np.mean(scores.psi_b)),
                   c_aa=float(np.mean(a * a)), c_ab=float(np.mean(a * b)), c_bb=float(np.mean(b * b)),
                   n=scores.n)


def omega(moments, theta1, theta2):
    '''Empirical covariance of psi(theta1) and psi(theta2); broadcasts over arrays.'''
    return theta1 * theta2 * moments.c_aa + (theta1 + theta2) * moments.c_ab + moments.c_bb


def q_hat(moments, theta):
    return math.sqrt(moments.n) * (moments.mean_a * theta + moments.mean_b)


@dataclass(frozen=True, eq=False)
class CrossfitResult:
    scores: ScoreDecomposition
    fits: Tuple[NuisanceFit, ...]
    moments: KernelMoments
    seed: int
    k: int
    folds: object = None
    fold_diagnostics: Tuple[FitDiagnostics, ...] = ()

    def diagnostics(self):
        return {'seed': self.seed, 'k': self.k, 'n': self.moments.n,
                'folds': [d.to_dict() for d in self.fold_diagnostics]}

    def write_diagnostics(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.diagnostics(), f, indent=2)


def _fold_task(ds, folds, fold, lambda_scale, clip_epsilon, standardize, unpenalized_intercept):
    train = folds.complement(fold)
    held_out = folds.indices(fold)
    fit, diagnostics = fit_nuisance(ds, train, lambda_scale, clip_epsilon, fold=fold,
                                    standardize=standardize,
                                    unpenalized_intercept=unpenalized_intercept)
    return fit, diagnostics, evaluate_score(ds, fit, rows=held_out, fold=fold)


def run_crossfit(ds, k, lambda_scale, seed, clip_epsilon=DEFAULT_CLIP_EPSILON, standardize=True,
                 unpenalized_intercept=False, n_jobs=1):
    '''Fit nuisances per fold and pool the held-out scores.

    ``k == 1`` disables sample splitting: one fit on all rows, scored on
    all rows.
    '''
    folds = single_fold(ds.n, seed) if k == 1 else assign_folds(ds.n, k, seed)

    outputs = Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(_fold_task)(ds, folds, fold, lambda_scale, clip_epsilon, standardize,
                            unpenalized_intercept)
        for fold in range(1, folds.k + 1))

    psi_a = np.empty(ds.n)
    psi_b = np.empty(ds.n)
    for fold, (_, _, part) in enumerate(outputs, start=1):
        rows = folds.indices(fold)
        psi_a[rows] = part.psi_a
        psi_b[rows] = part.psi_b
    scores = ScoreDecomposition(psi_a=psi_a, psi_b=psi_b, fold_of=folds.fold_of.copy())
    moments = KernelMoments.from_scores(scores)

    logger.debug(f'crossfit seed={seed} k={folds.k}: mean_a={moments.mean_a:.4g} '
                 f'mean_b={moments.mean_b:.4g}')
    return CrossfitResult(scores=scores, fits=tuple(o[0] for o in outputs), moments=moments,
                          seed=seed, k=folds.k, folds=folds,
                          fold_diagnostics=tuple(o[1] for o in outputs))


def repeat_crossfit(ds, k, lambda_scale, reps, seed, n_jobs=1, **kwargs):
    '''``reps`` independent cross-fits with seeds ``seed + 1 .. seed + reps``.'''
    if reps < 1:
        raise ConfigurationError(f'reps must be >= 1, got {reps}')
    return Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(run_crossfit)(ds, k, lambda_scale, seed + r, **kwargs)
        for r in range(1, reps + 1))
