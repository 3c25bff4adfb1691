import numpy as np
import pytest

from hdqlr.dml import ScoreDecomposition


@pytest.fixture
def random_scores():
    '''Factory of correlated score components with fold tags.'''

    def make(seed, n=50):
        gen = np.random.default_rng(seed)
        psi_a = -1.0 + 0.3 * gen.normal(size=n)
        psi_b = 1.0 + 0.5 * psi_a + gen.normal(size=n)
        return ScoreDecomposition(psi_a=psi_a, psi_b=psi_b, fold_of=np.ones(n, dtype=np.int64))

    return make
