# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

from dataclasses import dataclass

import numpy as np

from hdqlr import rng
from hdqlr.errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    '''``fold_of[i]`` is the fold (1..k) holding observation i.'''
    fold_of: np.ndarray
    k: int
    seed: int

    def __post_init__(self):
        fold_of = np.array(self.fold_of, dtype=np.int64, copy=True)
        fold_of.setflags(write=False)
        object.__setattr__(self, 'fold_of', fold_of)

    @property
    def n(self):
        return len(self.fold_of)

    def indices(self, fold):
        return np.flatnonzero(self.fold_of == fold)

    def complement(self, fold):
        if self.k == 1:
            return np.arange(self.n)
        return np.flatnonzero(self.fold_of != fold)

    def sizes(self):
        return [int(np.sum(self.fold_of == f)) for f in range(1, self.k + 1)]

    def __eq__(self, other):
        if not isinstance(other, FoldAssignment):
            return NotImplemented
        return self.k == other.k and self.seed == other.seed and np.array_equal(self.fold_of, other.fold_of)


def assign_folds(n, k, seed):
    '''Balanced random partition of ``range(n)`` into ``k`` folds.

    The indices are shuffled (Fisher-Yates, Philox stream ``(seed, FOLDS)``)
    and cut into ``k`` contiguous blocks whose sizes differ by at most one,
    larger blocks first.
    '''
    if k < 2:
        raise ConfigurationError(f'cross-fitting needs k >= 2 folds, got {k}')
    if n < 2 * k:
        raise ConfigurationError(f'n={n} is too small for {k} folds (need n >= {2 * k})')

    order = rng.make_rng(seed, rng.FOLDS).permutation(n)
    fold_of = np.empty(n, dtype=np.int64)
    for fold, block in enumerate(np.array_split(order, k), start=1):
        fold_of[block] = fold
    return FoldAssignment(fold_of=fold_of, k=k, seed=seed)


def single_fold(n, seed=0):
    '''Degenerate assignment used when nuisances are fit on the full sample.'''
    return FoldAssignment(fold_of=np.ones(n, dtype=np.int64), k=1, seed=seed)
