# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''One entry point per command for every inference method.

The methods differ only in how the cross-fits are produced and in the
decision taken from them:

    hdqlr     K folds, lasso nuisances, conditional QLR
    am16      one full-sample unpenalized fit, conditional QLR
    dml       K folds, lasso nuisances, DML t-test
    dml_nocf  one full-sample lasso fit, DML t-test
    ar        K folds, lasso nuisances, Anderson-Rubin
'''

from hdqlr.errors import ConfigurationError
from hdqlr.inference.baselines import ar_decision, ar_region, dml_decision, dml_region
from hdqlr.inference.estimate import dml_from_crossfits
from hdqlr.inference.grid import resolve_grid
from hdqlr.inference.procedure import (conditional_config, crossfits_for, decide_from_crossfits,
                                       region_from_crossfits)

CONDITIONAL = ('hdqlr', 'am16')
DML = ('dml', 'dml_nocf')


def method_config(cfg, method=None):
    '''``cfg`` with the cross-fitting settings ``method`` implies.'''
    method = method or cfg.method
    cfg = cfg.replace(method=method)
    if method == 'dml_nocf':
        return cfg.replace(k_folds=1)
    return conditional_config(cfg)


def crossfit_key(cfg):
    '''Cross-fits are shared between methods with equal keys.'''
    return (cfg.k_folds, cfg.lambda_scale, cfg.reps)


def decide(cfg, crossfits, theta0, grid=None):
    if cfg.method in CONDITIONAL:
        grid = grid if grid is not None else resolve_grid(cfg, crossfits)
        return decide_from_crossfits(crossfits, theta0, grid, cfg)
    if cfg.method in DML:
        estimate = dml_from_crossfits(crossfits, cfg.alpha, method=cfg.method)
        return dml_decision(estimate, theta0, cfg.seed)
    if cfg.method == 'ar':
        return ar_decision(crossfits, theta0, cfg.alpha, cfg.seed)
    raise ConfigurationError(f'unknown method {cfg.method!r}')


def prepare(ds, cfg, command='test'):
    '''Resolved config and cross-fits for ``command`` ('test' or 'ci').'''
    cfg = method_config(cfg.resolved(command))
    return cfg, crossfits_for(ds, cfg)


def region(cfg, crossfits):
    if cfg.method in DML:
        estimate = dml_from_crossfits(crossfits, cfg.alpha, method=cfg.method)
        return dml_region(estimate, resolve_grid(cfg, crossfits))
    grid = resolve_grid(cfg, crossfits)
    if cfg.method in CONDITIONAL:
        return region_from_crossfits(crossfits, grid, cfg)
    return ar_region(crossfits, grid, cfg.alpha)


def run_test(ds, theta0, cfg):
    cfg, crossfits = prepare(ds, cfg, 'test')
    return decide(cfg, crossfits, theta0)


def run_region(ds, cfg):
    return region(*prepare(ds, cfg, 'ci'))
