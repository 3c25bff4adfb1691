#!/usr/bin/env python3

# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import math

import numpy as np
import pandas as pd
import pytest
from scipy.optimize import minimize
from scipy.special import expit

from hdqlr.errors import ConfigurationError, SeparationError
from hdqlr.lasso import (BINOMIAL, GAUSSIAN, KKT_TOLERANCE, LassoProblem, default_penalty, fit_logit,
                         kkt_violation, penalized_objective, solve, solve_lasso_logit, solve_lasso_ols,
                         write_trace)


def test_default_penalty():
    assert default_penalty(500, 200, 1.0) == pytest.approx(math.sqrt(500 * math.log(500 * 200)))
    assert default_penalty(500, 200, 1.0) == pytest.approx(75.87, abs=0.01)
    assert default_penalty(500, 200, 0.5) == pytest.approx(0.5 * default_penalty(500, 200, 1.0))


@pytest.mark.parametrize('n,p,scale', [(1, 5, 1.0), (10, 0, 1.0), (10, 5, 0.0), (10, 5, -1.0)])
def test_default_penalty_arguments(n, p, scale):
    with pytest.raises(ConfigurationError):
        default_penalty(n, p, scale)


def test_problem_validation():
    with pytest.raises(ConfigurationError):
        LassoProblem(design=np.ones((3, 2)), response=np.array([0.0, 1.0, 2.0]), lam=1.0, family=BINOMIAL)
    with pytest.raises(ConfigurationError):
        LassoProblem(design=np.ones((3, 2)), response=np.ones(4), lam=1.0)
    with pytest.raises(ConfigurationError):
        LassoProblem(design=np.ones((3, 2)), response=np.ones(3), lam=-1.0)


@pytest.mark.parametrize('lam', [0.0, 5.0, 40.0, 1e4])
def test_soft_threshold_closed_form(lam):
    gen = np.random.default_rng(3)
    n = 50
    x = gen.normal(size=n)
    y = 0.7 * x + gen.normal(size=n)
    problem = LassoProblem(design=x[:, None], response=y, lam=lam)
    solution = solve_lasso_ols(problem)

    t = lam / n
    s = 2.0 * np.mean(x * y)
    expected = math.copysign(max(abs(s) - t, 0.0), s) / (2.0 * np.mean(x * x))
    assert solution.converged
    assert solution.coefficients[0] == pytest.approx(expected, abs=1e-6)


def test_gaussian_kkt(regression_data):
    x, y = regression_data
    problem = LassoProblem(design=x, response=y, lam=default_penalty(200, 10, 1.0), standardize=True)
    solution = solve_lasso_ols(problem)
    assert solution.converged
    assert solution.kkt_violation <= KKT_TOLERANCE
    grad = -2.0 * x.T @ (y - x @ solution.coefficients) / len(y)
    assert kkt_violation(solution.coefficients, grad, problem.thresholds()) <= KKT_TOLERANCE
    # the three true signals survive, the penalty is not vacuous
    assert set(np.flatnonzero(solution.coefficients)) >= {0, 1}
    assert solution.support_size < 10


def test_standardized_penalty_is_scale_equivariant(regression_data):
    x, y = regression_data
    scale = np.linspace(0.5, 5.0, x.shape[1])
    lam = default_penalty(200, 10, 0.5)
    plain = solve_lasso_ols(LassoProblem(design=x, response=y, lam=lam, standardize=True))
    scaled = solve_lasso_ols(LassoProblem(design=x * scale, response=y, lam=lam, standardize=True))
    np.testing.assert_allclose(scaled.coefficients * scale, plain.coefficients, atol=1e-4)


def test_unpenalized_intercept():
    gen = np.random.default_rng(4)
    x = gen.normal(size=(100, 2))
    y = 3.0 + gen.normal(size=100)
    solution = solve_lasso_ols(LassoProblem(design=x, response=y, lam=1e6, fit_intercept=True))
    assert np.all(solution.coefficients == 0.0)
    assert solution.intercept == pytest.approx(np.mean(y), abs=1e-6)


def test_logit_unpenalized_matches_newton_and_bfgs(logistic_data):
    x, y = logistic_data
    solution = solve_lasso_logit(LassoProblem(design=x, response=y, lam=0.0, family=BINOMIAL))
    assert solution.converged

    newton = fit_logit(x, y)
    np.testing.assert_allclose(solution.coefficients, newton.coefficients, atol=1e-4)

    def loss(beta):
        eta = x @ beta
        return np.mean(np.logaddexp(0.0, eta) - y * eta)

    oracle = minimize(loss, np.zeros(3), method='BFGS', options={'gtol': 1e-10})
    np.testing.assert_allclose(solution.coefficients, oracle.x, atol=1e-4)


def test_logit_kkt(logistic_data):
    x, y = logistic_data
    problem = LassoProblem(design=x, response=y, lam=default_penalty(400, 3, 1.0), family=BINOMIAL,
                           standardize=True)
    solution = solve(problem)
    assert solution.converged
    assert solution.kkt_violation <= KKT_TOLERANCE
    prob = 1.0 / (1.0 + np.exp(-(x @ solution.coefficients)))
    grad = x.T @ (prob - y) / len(y)
    assert kkt_violation(solution.coefficients, grad, problem.thresholds()) <= 1e-5


def test_separation():
    x = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    y = np.array([0.0, 0.0, 1.0, 1.0])
    with pytest.raises(SeparationError):
        solve_lasso_logit(LassoProblem(design=x, response=y, lam=0.0, family=BINOMIAL))


def test_objective_trace(regression_data):
    x, y = regression_data
    solution = solve_lasso_ols(LassoProblem(design=x, response=y, lam=20.0), trace=True)
    trace = np.array(solution.trace)
    assert len(trace) == solution.iterations
    assert np.all(np.diff(trace) <= 1e-12)
    assert trace[-1] == pytest.approx(solution.objective_value, rel=1e-9)

    write_trace(solution, 'trace.csv')
    frame = pd.read_csv('trace.csv')
    assert list(frame.columns) == ['iteration', 'objective']
    assert len(frame) == len(trace)


def weighted_l1(problem, solution):
    return float(np.sum(problem.loadings() * np.abs(solution.coefficients)))


@pytest.mark.parametrize('standardize', [False, True])
def test_penalty_shrinks_l1_norm(regression_data, logistic_data, standardize):
    x, y = regression_data
    norms = []
    for lam in [0.0, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0]:
        problem = LassoProblem(design=x, response=y, lam=lam, standardize=standardize)
        norms.append(weighted_l1(problem, solve_lasso_ols(problem)))
    assert np.all(np.diff(norms) <= 1e-5)

    x, y = logistic_data
    norms = []
    for lam in [1.0, 5.0, 10.0, 20.0, 40.0]:
        problem = LassoProblem(design=x, response=y, lam=lam, family=BINOMIAL, standardize=standardize)
        norms.append(weighted_l1(problem, solve_lasso_logit(problem)))
    assert np.all(np.diff(norms) <= 1e-5)


@pytest.mark.parametrize('family', [GAUSSIAN, BINOMIAL])
def test_column_permutation(regression_data, logistic_data, family):
    x, y = regression_data if family == GAUSSIAN else logistic_data
    lam = default_penalty(len(y), x.shape[1], 0.5)
    perm = np.random.default_rng(11).permutation(x.shape[1])
    plain = solve(LassoProblem(design=x, response=y, lam=lam, family=family, standardize=True))
    permuted = solve(LassoProblem(design=x[:, perm], response=y, lam=lam, family=family, standardize=True))
    np.testing.assert_allclose(permuted.coefficients, plain.coefficients[perm], atol=1e-5)


@pytest.mark.parametrize('standardize', [False, True])
def test_response_and_penalty_scale_together(regression_data, standardize):
    x, y = regression_data
    c = 3.0
    base = solve_lasso_ols(LassoProblem(design=x, response=y, lam=20.0, standardize=standardize))
    scaled = solve_lasso_ols(LassoProblem(design=x, response=c * y, lam=c * 20.0, standardize=standardize))
    np.testing.assert_allclose(scaled.coefficients, c * base.coefficients, atol=1e-5)


@pytest.mark.parametrize('family', [GAUSSIAN, BINOMIAL])
@pytest.mark.parametrize('standardize,fit_intercept', [(False, False), (True, False), (True, True)])
def test_reported_objective(regression_data, logistic_data, family, standardize, fit_intercept):
    x, y = regression_data if family == GAUSSIAN else logistic_data
    problem = LassoProblem(design=x, response=y, lam=10.0, family=family, standardize=standardize,
                           fit_intercept=fit_intercept)
    solution = solve(problem)
    recomputed = penalized_objective(problem, solution.coefficients, solution.intercept)
    assert solution.objective_value == pytest.approx(recomputed, rel=1e-10)


def test_dominant_penalty_zeroes_ols(regression_data):
    x, y = regression_data
    n = len(y)
    lam = 2.0 * np.max(np.abs(x.T @ y / n)) * n * (1.0 + 1e-9)
    solution = solve_lasso_ols(LassoProblem(design=x, response=y, lam=lam))
    assert solution.converged
    assert np.all(solution.coefficients == 0.0)


def test_dominant_penalty_zeroes_logit(logistic_data):
    x, y = logistic_data
    solution = solve_lasso_logit(LassoProblem(design=x, response=y, lam=1e8, family=BINOMIAL))
    assert solution.converged
    assert np.all(solution.coefficients == 0.0)
    np.testing.assert_array_equal(expit(x @ solution.coefficients), 0.5)


if __name__ == '__main__':
    pytest.main(['-s', '-q', __file__])
