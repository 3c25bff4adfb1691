# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Unpenalized OLS and maximum-likelihood logit on the full covariate set.

These are the nuisance estimators of the low-dimensional conditional QLR
comparison: no regularization beyond a 1e-10 ridge jitter that keeps the
Newton system numerically solvable. A design without full column rank is an
error, not something to regularize away.
'''

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import expit

from hdqlr.errors import SingularFitError

logger = logging.getLogger(__name__)

RIDGE_JITTER = 1e-10
NEWTON_ITERATIONS = 100
NEWTON_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class UnpenalizedFit:
    coefficients: np.ndarray
    intercept: float
    iterations: int
    converged: bool


def _with_intercept(design, fit_intercept):
    if fit_intercept:
        return np.column_stack([np.ones(design.shape[0]), design])
    return design


def _check_rank(design):
    n, q = design.shape
    if q >= n:
        raise SingularFitError(f'{q} regressors for {n} observations; the unpenalized fit is not identified')
    rank = np.linalg.matrix_rank(design)
    if rank < q:
        raise SingularFitError(f'design has rank {rank} < {q} columns')


def _split(beta, fit_intercept):
    if fit_intercept:
        return beta[1:], float(beta[0])
    return beta, 0.0


def fit_ols(design, response, fit_intercept=False):
    X = _with_intercept(np.asarray(design, dtype=np.float64), fit_intercept)
    _check_rank(X)
    beta, *_ = scipy.linalg.lstsq(X, np.asarray(response, dtype=np.float64))
    coefficients, intercept = _split(beta, fit_intercept)
    return UnpenalizedFit(coefficients=coefficients, intercept=intercept, iterations=1, converged=True)


def fit_logit(design, response, fit_intercept=False, max_iterations=NEWTON_ITERATIONS):
    '''Damped Newton-Raphson for the logistic likelihood.

    Without a finite maximizer (separation) the iterations run out with
    ``converged=False``; the last iterate is returned and a warning logged.
    '''
    X = _with_intercept(np.asarray(design, dtype=np.float64), fit_intercept)
    y = np.asarray(response, dtype=np.float64)
    _check_rank(X)
    n, q = X.shape

    def neg_loglik(beta):
        eta = X @ beta
        return float(np.mean(np.logaddexp(0.0, eta) - y * eta))

    beta = np.zeros(q)
    current = neg_loglik(beta)
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        prob = expit(X @ beta)
        grad = X.T @ (prob - y) / n
        hess = (X.T * (prob * (1.0 - prob))) @ X / n + RIDGE_JITTER * np.eye(q)
        try:
            step = scipy.linalg.solve(hess, grad, assume_a='pos')
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
            raise SingularFitError(f'Newton system is singular: {e}') from e

        scale = 1.0
        while scale >= 1e-10:
            trial = beta - scale * step
            value = neg_loglik(trial)
            if value <= current:
                break
            scale /= 2.0
        else:
            converged = np.max(np.abs(grad)) < 1e-8
            break

        move = np.max(np.abs(trial - beta))
        beta, current = trial, value
        if move < NEWTON_TOLERANCE:
            converged = True
            break

    if not converged:
        logger.warning(f'unpenalized logit did not converge in {iterations} iterations '
                       '(likely quasi-separation); using the last iterate')
    coefficients, intercept = _split(beta, fit_intercept)
    return UnpenalizedFit(coefficients=coefficients, intercept=intercept, iterations=iterations,
                          converged=bool(converged))
