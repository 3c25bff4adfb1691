from types import SimpleNamespace

import numpy as np
import pytest

from hdqlr.config import GridSpec
from hdqlr.dml import KernelMoments, ScoreDecomposition, repeat_crossfit
from hdqlr.sim import generate


@pytest.fixture
def moments():
    '''Strongly identified kernel with root at theta = 1.'''
    return KernelMoments(mean_a=-0.5, mean_b=0.5, c_aa=0.3, c_ab=-0.1, c_bb=0.8, n=400)


@pytest.fixture
def weak_moments():
    return KernelMoments(mean_a=-0.002, mean_b=0.001, c_aa=0.25, c_ab=0.05, c_bb=0.9, n=400)


@pytest.fixture
def strong_data(strong_design):
    return generate(strong_design)


@pytest.fixture
def strong_crossfits(strong_data):
    return repeat_crossfit(strong_data, 3, 0.5, 2, 3)


@pytest.fixture
def unit_grid():
    return GridSpec(0.0, 2.0, 11)


@pytest.fixture
def scores_crossfit():
    '''Factory of cross-fit stand-ins carrying only scores and their moments.'''

    def make(psi_a, psi_b, seed=1):
        psi_a = np.asarray(psi_a, dtype=np.float64)
        scores = ScoreDecomposition(psi_a=psi_a, psi_b=np.asarray(psi_b, dtype=np.float64),
                                    fold_of=np.ones(len(psi_a), dtype=np.int64))
        return SimpleNamespace(scores=scores, moments=KernelMoments.from_scores(scores), seed=seed)

    return make
