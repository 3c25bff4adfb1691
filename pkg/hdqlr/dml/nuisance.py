# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Nuisance estimation on a set of training rows.

Three regressions per fit: logit of D on (Z, X), logit of Z on X, and
least squares of Y on (Z, X). A positive ``lambda_scale`` uses the lasso
with penalty ``lambda_scale * sqrt(n log(q n))`` (n training rows, q design
columns); ``lambda_scale == 0`` uses the unpenalized estimators.
'''

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from hdqlr.dml.score import NuisanceFit
from hdqlr.errors import ConvergenceError
from hdqlr.lasso import (BINOMIAL, GAUSSIAN, LassoProblem, default_penalty, fit_logit, fit_ols,
                         solve_lasso_logit, solve_lasso_ols)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitDiagnostics:
    fold: int
    n_train: int
    penalties: Dict[str, float] = field(default_factory=dict)
    support: Dict[str, int] = field(default_factory=dict)
    iterations: Dict[str, int] = field(default_factory=dict)

    def to_dict(self):
        return {'fold': self.fold, 'n_train': self.n_train, 'penalties': dict(self.penalties),
                'support': dict(self.support), 'iterations': dict(self.iterations)}


def _lasso(design, response, family, lambda_scale, standardize, fit_intercept, fold, name):
    n, q = design.shape
    lam = default_penalty(n, q, lambda_scale)
    problem = LassoProblem(design=design, response=response, lam=lam, family=family,
                           standardize=standardize, fit_intercept=fit_intercept)
    solver = solve_lasso_ols if family == GAUSSIAN else solve_lasso_logit
    solution = solver(problem)
    if not solution.converged:
        raise ConvergenceError(f'{name} lasso did not converge in {solution.iterations} iterations '
                               f'(KKT violation {solution.kkt_violation:.3g})', fold=fold)
    return solution, lam


def fit_nuisance(ds, rows, lambda_scale, clip_epsilon, fold=1, standardize=True,
                 unpenalized_intercept=False):
    '''Return ``(NuisanceFit, FitDiagnostics)`` estimated on ``rows`` of ``ds``.'''
    rows = np.asarray(rows)
    x, y, d, z = ds.x[rows], ds.y[rows], ds.d[rows], ds.z[rows]
    zx = np.column_stack([z, x])

    if lambda_scale == 0.0:
        first = fit_logit(zx, d, fit_intercept=unpenalized_intercept)
        prop = fit_logit(x, z, fit_intercept=unpenalized_intercept)
        reduced = fit_ols(zx, y, fit_intercept=unpenalized_intercept)
        penalties = {'first_stage': 0.0, 'propensity': 0.0, 'reduced_form': 0.0}
        iterations = {'first_stage': first.iterations, 'propensity': prop.iterations,
                      'reduced_form': reduced.iterations}
    else:
        first, lam1 = _lasso(zx, d, BINOMIAL, lambda_scale, standardize, unpenalized_intercept, fold,
                             'first-stage')
        prop, lam2 = _lasso(x, z, BINOMIAL, lambda_scale, standardize, unpenalized_intercept, fold,
                            'propensity')
        reduced, lam3 = _lasso(zx, y, GAUSSIAN, lambda_scale, standardize, unpenalized_intercept, fold,
                               'reduced-form')
        penalties = {'first_stage': lam1, 'propensity': lam2, 'reduced_form': lam3}
        iterations = {'first_stage': first.iterations, 'propensity': prop.iterations,
                      'reduced_form': reduced.iterations}

    fit = NuisanceFit(beta11=float(first.coefficients[0]), beta12=first.coefficients[1:],
                      beta21=float(reduced.coefficients[0]), beta22=reduced.coefficients[1:],
                      gamma=prop.coefficients, clip_epsilon=clip_epsilon,
                      intercept_first=first.intercept, intercept_reduced=reduced.intercept,
                      intercept_propensity=prop.intercept)
    diagnostics = FitDiagnostics(fold=fold, n_train=len(rows), penalties=penalties,
                                 support=fit.support_sizes(), iterations=iterations)
    logger.debug(f'fold {fold}: n_train={len(rows)} penalties={penalties} support={diagnostics.support}')
    return fit, diagnostics
