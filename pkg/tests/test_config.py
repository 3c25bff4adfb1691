#!/usr/bin/env python3

# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import pytest

from hdqlr.config import PAPER_DRAWS, PAPER_REPLICATIONS, GridSpec, RunConfig
from hdqlr.errors import ConfigurationError


def test_json_round_trip():
    cfg = RunConfig(method='ar', k_folds=4, alpha=0.1, grid=GridSpec(-1.0, 3.0, 81), reps=3,
                    statistic='simulated', standardize=False)
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_integers_are_accepted_as_floats():
    cfg = RunConfig.from_dict({'lambda_scale': 1, 'grid': {'lo': -2, 'hi': 2}})
    assert cfg.lambda_scale == 1.0
    assert isinstance(cfg.lambda_scale, float)
    assert cfg.grid == GridSpec(-2.0, 2.0, 401)


@pytest.mark.parametrize('data', [
    {'k_folds': '3'},
    {'k_folds': True},
    {'alpha': 'small'},
    {'seed': 1.5},
    {'paper_scale': 'yes'},
    {'method': 3},
    {'reps': '2'},
    {'grid': {'lo': 0.0}},
    {'grid': {'lo': 0.0, 'hi': 2.0, 'step': 0.1}},
    {'grid': {'lo': 0.0, 'hi': 2.0, 'points': 11.0}},
    {'unknown': 1}
])
def test_rejected_values(data):
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict(data)


def test_optional_fields_accept_null():
    cfg = RunConfig.from_dict({'reps': None, 'grid': None})
    assert cfg.reps is None
    assert cfg.grid is None


def test_not_an_object():
    with pytest.raises(ConfigurationError):
        RunConfig.from_json('[1, 2]')
    with pytest.raises(ConfigurationError):
        RunConfig.from_json('{"alpha": ')


def test_resolved():
    assert RunConfig().resolved('ci').reps == 10
    assert RunConfig().resolved('test').reps == 1
    assert RunConfig(reps=4).resolved('ci').reps == 4
    paper = RunConfig(paper_scale=True).resolved()
    assert (paper.replications, paper.draws) == (PAPER_REPLICATIONS, PAPER_DRAWS)


if __name__ == '__main__':
    pytest.main(['-s', '-q', __file__])
