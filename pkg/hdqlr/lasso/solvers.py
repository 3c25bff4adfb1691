# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''l1-penalized least squares and logistic regression.

Both families minimize

    loss(beta) + (lam / n) * sum_j w_j |beta_j|

where loss is mean((y - X beta)^2) for ``gaussian`` and the negative mean
log-likelihood for ``binomial``. The penalty loadings w_j are 1, or the
root-mean-square of column j when ``standardize`` is set, which is the
same problem as penalizing coefficients of columns scaled to unit second
moment. An optional unpenalized intercept is available but off by default.

Gaussian problems are solved by cyclic coordinate descent with soft
thresholding; binomial problems by proximal Newton (IRLS outer loop,
coordinate descent on the quadratic model, backtracking on the true
objective). Every solution carries its KKT violation as a certificate.
'''

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd
from scipy.special import expit

from hdqlr.errors import ConfigurationError, SeparationError

logger = logging.getLogger(__name__)

GAUSSIAN = 'gaussian'
BINOMIAL = 'binomial'

KKT_TOLERANCE = 1e-6
COEF_TOLERANCE = 1e-7
MAX_ITERATIONS = 10_000
INNER_SWEEPS = 1_000

# linear predictors this large mean the likelihood is pushing to infinity
SEPARATION_BOUND = 100.0


@dataclass(frozen=True, eq=False)
class LassoProblem:
    design: np.ndarray
    response: np.ndarray
    lam: float
    family: str = GAUSSIAN
    standardize: bool = False
    fit_intercept: bool = False

    def __post_init__(self):
        design = np.asarray(self.design, dtype=np.float64)
        response = np.asarray(self.response, dtype=np.float64)
        if design.ndim != 2 or response.ndim != 1 or design.shape[0] != response.shape[0]:
            raise ConfigurationError(f'design {design.shape} and response {response.shape} do not conform')
        if self.family not in (GAUSSIAN, BINOMIAL):
            raise ConfigurationError(f'unknown family {self.family!r}')
        if not self.lam >= 0.0:
            raise ConfigurationError(f'penalty must be non-negative, got {self.lam}')
        if not (np.isfinite(design).all() and np.isfinite(response).all()):
            raise ConfigurationError('design and response must be finite')
        if self.family == BINOMIAL and not np.isin(response, (0.0, 1.0)).all():
            raise ConfigurationError('binomial response must be 0/1')
        object.__setattr__(self, 'design', design)
        object.__setattr__(self, 'response', response)

    @property
    def n(self):
        return self.design.shape[0]

    @property
    def q(self):
        return self.design.shape[1]

    def loadings(self):
        if not self.standardize:
            return np.ones(self.q)
        rms = np.sqrt(np.mean(self.design ** 2, axis=0))
        return np.where(rms > 0.0, rms, 1.0)

    def thresholds(self):
        return self.lam / self.n * self.loadings()


@dataclass(frozen=True, eq=False)
class LassoSolution:
    coefficients: np.ndarray
    objective_value: float
    iterations: int
    converged: bool
    kkt_violation: float
    intercept: float = 0.0
    trace: Tuple[float, ...] = ()

    @property
    def support_size(self):
        return int(np.count_nonzero(self.coefficients))


def default_penalty(n, p, scale):
    '''``scale * sqrt(n * log(p * n))``.'''
    if n < 2:
        raise ConfigurationError(f'penalty needs n >= 2, got {n}')
    if p < 1:
        raise ConfigurationError(f'penalty needs p >= 1, got {p}')
    if not scale > 0.0:
        raise ConfigurationError(f'penalty scale must be positive, got {scale}')
    return scale * math.sqrt(n * math.log(p * n))


def penalized_objective(problem, coefficients, intercept=0.0):
    eta = problem.design @ coefficients + intercept
    if problem.family == GAUSSIAN:
        loss = np.mean((problem.response - eta) ** 2)
    else:
        loss = np.mean(np.logaddexp(0.0, eta) - problem.response * eta)
    return float(loss + np.sum(problem.thresholds() * np.abs(coefficients)))


def kkt_violation(coefficients, gradient, thresholds):
    '''Largest subgradient slack of the l1 optimality conditions.'''
    if len(coefficients) == 0:
        return 0.0
    active = coefficients != 0.0
    slack = np.where(active,
                     np.abs(gradient + thresholds * np.sign(coefficients)),
                     np.maximum(np.abs(gradient) - thresholds, 0.0))
    return float(slack.max())


def _augmented(problem):
    '''Design, thresholds with an unpenalized leading column of ones when an intercept is fit.'''
    thresholds = problem.thresholds()
    if not problem.fit_intercept:
        return problem.design, thresholds
    design = np.column_stack([np.ones(problem.n), problem.design])
    return design, np.concatenate([[0.0], thresholds])


def _coordinate_descent(A, b, t, beta, tol, max_sweeps, on_sweep=None):
    '''Minimize 0.5 beta'A beta - b'beta + sum_j t_j |beta_j| in place.

    Full sweeps alternate with sweeps over the current support until a
    full sweep moves no coefficient by ``tol`` or more. Returns the number
    of sweeps used.
    '''
    diag = np.diag(A).copy()
    coords = np.flatnonzero(diag > 0.0)
    u = b - A @ beta
    sweeps = 0

    def sweep(indices):
        biggest = 0.0
        for j in indices:
            ajj = diag[j]
            s = u[j] + ajj * beta[j]
            new = math.copysign(max(abs(s) - t[j], 0.0), s) / ajj
            delta = new - beta[j]
            if delta != 0.0:
                beta[j] = new
                u[:] -= A[:, j] * delta
                biggest = max(biggest, abs(delta))
        return biggest

    while sweeps < max_sweeps:
        biggest = sweep(coords)
        sweeps += 1
        if on_sweep is not None:
            on_sweep(beta)
        if biggest < tol:
            break
        while sweeps < max_sweeps:
            biggest = sweep(coords[beta[coords] != 0.0])
            sweeps += 1
            if on_sweep is not None:
                on_sweep(beta)
            if biggest < tol:
                break
    return sweeps


def _split(problem, beta):
    if problem.fit_intercept:
        return beta[1:].copy(), float(beta[0])
    return beta.copy(), 0.0


def _solution(problem, beta, iterations, converged, kkt, trace):
    coefficients, intercept = _split(problem, beta)
    return LassoSolution(coefficients=coefficients,
                         objective_value=penalized_objective(problem, coefficients, intercept),
                         iterations=iterations, converged=converged, kkt_violation=kkt,
                         intercept=intercept, trace=tuple(trace))


def solve_lasso_ols(problem, max_iterations=MAX_ITERATIONS, tol=COEF_TOLERANCE,
                    kkt_tolerance=KKT_TOLERANCE, trace=False):
    if problem.family != GAUSSIAN:
        raise ConfigurationError(f'solve_lasso_ols needs a gaussian problem, got {problem.family}')

    X, t = _augmented(problem)
    n = problem.n
    # loss = mean(y^2) - 2 c'beta + beta' G beta
    G = X.T @ X / n
    c = X.T @ problem.response / n
    A, b = 2.0 * G, 2.0 * c
    yy = float(np.mean(problem.response ** 2))

    history = []

    def record(beta):
        history.append(yy - 2.0 * c @ beta + beta @ G @ beta + np.sum(t * np.abs(beta)))

    on_sweep = record if trace else None

    beta = np.zeros(X.shape[1])
    sweeps, step_tol = 0, tol
    converged, kkt = False, math.inf
    while sweeps < max_iterations:
        sweeps += _coordinate_descent(A, b, t, beta, step_tol, max_iterations - sweeps, on_sweep)
        kkt = kkt_violation(beta, A @ beta - b, t)
        if kkt <= kkt_tolerance:
            converged = True
            break
        step_tol /= 10.0

    if not converged:
        logger.debug(f'lasso OLS stopped after {sweeps} sweeps with KKT violation {kkt:.3g}')
    return _solution(problem, beta, sweeps, converged, kkt, history)


def solve_lasso_logit(problem, max_iterations=MAX_ITERATIONS, tol=COEF_TOLERANCE,
                      kkt_tolerance=KKT_TOLERANCE, trace=False):
    if problem.family != BINOMIAL:
        raise ConfigurationError(f'solve_lasso_logit needs a binomial problem, got {problem.family}')

    X, t = _augmented(problem)
    y = problem.response
    n = problem.n
    unpenalized = not np.any(t > 0.0)

    def objective(beta):
        eta = X @ beta
        return float(np.mean(np.logaddexp(0.0, eta) - y * eta) + np.sum(t * np.abs(beta)))

    beta = np.zeros(X.shape[1])
    current = objective(beta)
    history = [current] if trace else []
    last_move = math.inf
    converged, kkt, iterations = False, math.inf, 0

    while iterations < max_iterations:
        eta = X @ beta
        if unpenalized and np.max(np.abs(eta), initial=0.0) > SEPARATION_BOUND:
            raise SeparationError('unpenalized logistic likelihood has no finite maximizer '
                                  '(the classes are separable)')
        prob = expit(eta)
        grad = X.T @ (prob - y) / n
        kkt = kkt_violation(beta, grad, t)
        if kkt <= kkt_tolerance and (iterations == 0 or last_move < tol):
            converged = True
            break

        weights = np.maximum(prob * (1.0 - prob), 1e-12)
        H = (X.T * weights) @ X / n
        candidate = beta.copy()
        _coordinate_descent(H, H @ beta - grad, t, candidate, tol / 10.0, INNER_SWEEPS)
        direction = candidate - beta
        decrease = grad @ direction + np.sum(t * (np.abs(candidate) - np.abs(beta)))

        step, accepted = 1.0, False
        while step >= 1e-12:
            trial = beta + step * direction
            value = objective(trial)
            if value <= current + 1e-4 * step * min(decrease, 0.0):
                accepted = True
                break
            step /= 2.0
        iterations += 1
        if not accepted:
            # no representable descent left
            converged = kkt <= kkt_tolerance
            break

        last_move = float(np.max(np.abs(trial - beta), initial=0.0))
        beta, current = trial, value
        if trace:
            history.append(current)

    if not converged:
        logger.debug(f'lasso logit stopped after {iterations} iterations with KKT violation {kkt:.3g}')
    return _solution(problem, beta, iterations, converged, kkt, history)


def solve(problem, **kwargs):
    if problem.family == GAUSSIAN:
        return solve_lasso_ols(problem, **kwargs)
    return solve_lasso_logit(problem, **kwargs)


def write_trace(solution, path):
    '''Objective value per iteration as CSV (needs ``trace=True`` at solve time).'''
    frame = pd.DataFrame({'iteration': np.arange(len(solution.trace)), 'objective': solution.trace})
    frame.to_csv(path, index=False, float_format='%.17g')
