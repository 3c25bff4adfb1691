#!/usr/bin/env python3

# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import pytest

from hdqlr.config import METHODS, GridSpec, RunConfig
from hdqlr.errors import ConfigurationError, WeakIdentificationError
from hdqlr.inference import method_config, prepare, region, run_region, run_test
from hdqlr.inference.methods import crossfit_key


def test_method_settings():
    cfg = RunConfig(k_folds=5, lambda_scale=0.7, reps=3)
    assert crossfit_key(method_config(cfg, 'dml_nocf')) == (1, 0.7, 3)
    assert crossfit_key(method_config(cfg, 'am16')) == (1, 0.0, 1)
    shared = {crossfit_key(method_config(cfg, m)) for m in ('hdqlr', 'dml', 'ar')}
    assert shared == {(5, 0.7, 3)}
    assert method_config(cfg, 'ar').method == 'ar'
    assert method_config(cfg.replace(method='am16')).k_folds == 1


def test_prepare_resolves_repetitions(strong_data, fast_config):
    cfg, crossfits = prepare(strong_data, fast_config, 'test')
    assert cfg.reps == 1
    assert len(crossfits) == 1
    assert crossfits[0].k == 3


@pytest.mark.parametrize('method', METHODS)
def test_every_method_tests(method, strong_data, fast_config):
    cfg = fast_config.replace(method=method, grid=GridSpec(0.0, 2.0, 11))
    outcome = run_test(strong_data, -5.0, cfg)
    assert outcome.method == method
    assert outcome.reject
    assert outcome.reject == (outcome.statistic > outcome.critical_value)


@pytest.mark.parametrize('method', METHODS)
def test_every_method_inverts(method, strong_data, fast_config):
    cfg = fast_config.replace(method=method, reps=2, grid=GridSpec(0.0, 2.0, 21))
    result = run_region(strong_data, cfg)
    document = result.to_dict()
    assert document['method'] == method
    assert not result.empty
    assert ('estimate' in document) == method.startswith('dml')


def test_weak_dml_region_fails_fast(fast_config, scores_crossfit):
    weak = [scores_crossfit([-1.0, 1.0, -1.0, 1.0], [1.0, 2.0, 0.0, 1.0])]
    with pytest.raises(WeakIdentificationError):
        region(fast_config.replace(method='dml'), weak)
    with pytest.raises(ConfigurationError):
        region(fast_config, weak)


if __name__ == '__main__':
    pytest.main(['-s', '-q', __file__])
