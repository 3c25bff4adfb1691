#!/usr/bin/env python3

# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import numpy as np
import pytest

from hdqlr.errors import SingularFitError
from hdqlr.lasso import fit_logit, fit_ols


def test_ols_matches_lstsq(regression_data):
    x, y = regression_data
    fit = fit_ols(x, y)
    expected, *_ = np.linalg.lstsq(x, y, rcond=None)
    np.testing.assert_allclose(fit.coefficients, expected, atol=1e-10)
    assert fit.intercept == 0.0


def test_ols_intercept(regression_data):
    x, y = regression_data
    fit = fit_ols(x, y + 2.5, fit_intercept=True)
    expected, *_ = np.linalg.lstsq(np.column_stack([np.ones(len(y)), x]), y + 2.5, rcond=None)
    assert fit.intercept == pytest.approx(expected[0])
    np.testing.assert_allclose(fit.coefficients, expected[1:], atol=1e-10)


def test_logit_score_equations(logistic_data):
    x, y = logistic_data
    fit = fit_logit(x, y, fit_intercept=True)
    assert fit.converged
    design = np.column_stack([np.ones(len(y)), x])
    prob = 1.0 / (1.0 + np.exp(-(fit.intercept + x @ fit.coefficients)))
    np.testing.assert_allclose(design.T @ (prob - y) / len(y), 0.0, atol=1e-8)


def test_rank_deficiency():
    gen = np.random.default_rng(0)
    with pytest.raises(SingularFitError):
        fit_ols(gen.normal(size=(5, 5)), gen.normal(size=5))
    x = gen.normal(size=(20, 2))
    with pytest.raises(SingularFitError):
        fit_logit(np.column_stack([x, x[:, 0]]), (gen.random(20) < 0.5).astype(float))


def test_separable_logit_warns_and_returns(caplog):
    x = np.array([[-2.0], [-1.0], [1.0], [2.0], [3.0]])
    y = np.array([0.0, 0.0, 1.0, 1.0, 1.0])
    fit = fit_logit(x, y)
    assert not fit.converged
    assert fit.coefficients[0] > 5.0
    assert 'did not converge' in caplog.text


if __name__ == '__main__':
    pytest.main(['-s', '-q', __file__])
