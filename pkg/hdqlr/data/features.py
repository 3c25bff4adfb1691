# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

import numpy as np

from hdqlr.errors import CapacityError, ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureExpansionSpec:
    '''Polynomial expansion of the covariates.

    ``base_columns`` indexes the covariates to expand (``None``: all).
    Degree 2 appends the square of every base column and, with
    ``include_interactions``, every pairwise product.
    '''
    base_columns: Optional[Tuple[int, ...]] = None
    degree: int = 2
    include_interactions: bool = True

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise ConfigurationError(f'degree must be 1 or 2, got {self.degree}')
        if self.base_columns is not None:
            object.__setattr__(self, 'base_columns', tuple(int(c) for c in self.base_columns))


def expanded_width(p, n_base, spec):
    '''Width of a uniform expansion: p + n_base squares + n_base(n_base - 1)/2
    products. ``expand_features`` produces exactly this many columns unless
    it skips degenerate terms.'''
    if spec.degree == 1:
        return p
    extra = n_base
    if spec.include_interactions:
        extra += n_base * (n_base - 1) // 2
    return p + extra


def _degenerate(column, a, b, x):
    # constant products fail Dataset validation; the square of a 0/1 column repeats it
    return np.ptp(column) == 0.0 or (a == b and np.array_equal(column, x[:, a]))


def expand_features(ds, spec, max_columns=10_000):
    '''Dataset with squares ("a^2") and products ("a*b") of the base
    columns appended after the original covariates.

    Every base column is expanded, except for two kinds of degenerate term,
    which are dropped and counted in an INFO log line: constant products
    (disjoint dummies, a dummy times its complement) and squares equal to
    their column (0/1 dummies). Terms whose name already exists are not
    added again, so expanding twice with the same base columns changes
    nothing. ``max_columns`` bounds the width actually produced.
    '''
    if spec.degree == 1:
        return ds

    base = range(ds.p) if spec.base_columns is None else spec.base_columns
    base = list(base)
    for c in base:
        if not 0 <= c < ds.p:
            raise ConfigurationError(f'base column {c} out of range for p={ds.p}')
    if len(set(base)) != len(base):
        raise ConfigurationError('duplicate base columns')
    # the intercept column is never expanded
    base = [c for c in base if ds.column_names[c] != ds.intercept]

    names = ds.column_names
    terms = [(f'{names[c]}^2', c, c) for c in base]
    if spec.include_interactions:
        terms += [(f'{names[a]}*{names[b]}', a, b) for a, b in combinations(base, 2)]

    seen = set(names)
    new_names, new_columns, skipped = [], [], []
    for name, a, b in terms:
        if name in seen:
            continue
        seen.add(name)
        column = ds.x[:, a] * ds.x[:, b]
        if _degenerate(column, a, b, ds.x):
            skipped.append(name)
            continue
        if ds.p + len(new_columns) >= max_columns:
            raise CapacityError(f'expansion of {ds.p} columns exceeds the maximum of {max_columns} '
                                f'(uniform width {expanded_width(ds.p, len(base), spec)})')
        new_names.append(name)
        new_columns.append(column)
    if skipped:
        logger.info(f'expansion dropped {len(skipped)} degenerate terms: {skipped[:10]}')

    if not new_columns:
        return ds
    x = np.column_stack([ds.x, *new_columns])
    logger.info(f'expanded {ds.p} covariates to {x.shape[1]}')
    return ds.with_covariates(x, names + tuple(new_names))
