import numpy as np
import pytest


@pytest.fixture
def regression_data():
    gen = np.random.default_rng(7)
    n, p = 200, 10
    x = gen.normal(size=(n, p))
    beta = np.zeros(p)
    beta[:3] = [1.5, -2.0, 0.5]
    y = x @ beta + gen.normal(size=n)
    return x, y


@pytest.fixture
def logistic_data():
    gen = np.random.default_rng(8)
    n = 400
    x = gen.normal(size=(n, 3))
    eta = x @ np.array([0.8, -0.5, 0.3])
    y = (gen.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(float)
    return x, y
