# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Reproducible random streams.

All randomness in hdqlr (fold splits, simulated datasets, critical value
draws) comes from numpy's Philox4x64-10 counter-based bit generator keyed by
a SeedSequence. A stream is identified by the master seed plus a tuple of
non-negative integers (its spawn key), so any consumer can re-derive the
exact stream another consumer used without sharing state.
'''

import numpy as np


def theta_key(theta):
    '''Two 32-bit words holding the IEEE-754 bit pattern of ``theta``.'''
    bits = int(np.array(float(theta), dtype=np.float64).view(np.uint64))
    return (bits >> 32, bits & 0xFFFF_FFFF)


def make_rng(seed, *stream):
    '''Generator for the stream ``(seed, *stream)``.

    ``seed`` must be a non-negative integer; every element of ``stream`` must
    be a non-negative integer or a tuple of them (flattened in order).
    '''
    key = []
    for part in stream:
        if isinstance(part, tuple):
            key.extend(int(p) for p in part)
        else:
            key.append(int(part))
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(seq))


# Stream tags; the first element of every spawn key.
FOLDS = 1
DGP = 2
CRITICAL_DRAWS = 3
SIMULATED_STATISTIC = 4
REPLICATION = 5
