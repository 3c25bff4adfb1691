# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Run configuration shared by the library entry points and the CLI.'''

import dataclasses
import json
import typing
from dataclasses import dataclass
from typing import Optional

from hdqlr.errors import ConfigurationError


METHODS = ('hdqlr', 'am16', 'dml', 'dml_nocf', 'ar')
STATISTICS = ('observed', 'simulated')
INNER = ('exact', 'grid')

PAPER_REPLICATIONS = 2500
PAPER_DRAWS = 1000


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    points: int = 401

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ConfigurationError(f'grid needs lo < hi, got [{self.lo}, {self.hi}]')
        if self.points < 2:
            raise ConfigurationError(f'grid needs at least 2 points, got {self.points}')


@dataclass(frozen=True)
class RunConfig:
    method: str = 'hdqlr'
    k_folds: int = 3
    alpha: float = 0.05
    lambda_scale: float = 0.5
    grid: Optional[GridSpec] = None
    draws: int = 500
    reps: Optional[int] = None
    seed: int = 0
    clip_epsilon: float = 0.01
    paper_scale: bool = False
    replications: int = 500
    statistic: str = 'observed'
    inner: str = 'exact'
    unpenalized_intercept: bool = False
    standardize: bool = True
    n_jobs: int = 1
    max_columns: int = 10_000

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f'unknown method {self.method!r}, expected one of {METHODS}')
        if self.k_folds < 1:
            raise ConfigurationError(f'k_folds must be >= 1, got {self.k_folds}')
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f'alpha must lie in (0, 1), got {self.alpha}')
        if self.lambda_scale < 0.0:
            raise ConfigurationError(f'lambda_scale must be >= 0, got {self.lambda_scale}')
        if self.draws < 100:
            raise ConfigurationError(f'draws must be >= 100, got {self.draws}')
        if self.reps is not None and self.reps < 1:
            raise ConfigurationError(f'reps must be >= 1, got {self.reps}')
        if self.seed < 0:
            raise ConfigurationError(f'seed must be non-negative, got {self.seed}')
        if not 0.0 < self.clip_epsilon < 0.5:
            raise ConfigurationError(f'clip_epsilon must lie in (0, 0.5), got {self.clip_epsilon}')
        if self.replications < 1:
            raise ConfigurationError(f'replications must be >= 1, got {self.replications}')
        if self.statistic not in STATISTICS:
            raise ConfigurationError(f'statistic must be one of {STATISTICS}')
        if self.inner not in INNER:
            raise ConfigurationError(f'inner must be one of {INNER}')
        if self.n_jobs == 0:
            raise ConfigurationError('n_jobs must be non-zero')

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def resolved(self, command='test'):
        '''Copy with ``reps`` filled in for ``command`` and --paper-scale applied.'''
        cfg = self
        if cfg.reps is None:
            cfg = cfg.replace(reps=10 if command == 'ci' else 1)
        if cfg.paper_scale:
            cfg = cfg.replace(replications=PAPER_REPLICATIONS, draws=PAPER_DRAWS)
        return cfg

    def to_dict(self):
        data = dataclasses.asdict(self)
        if self.grid is not None:
            data['grid'] = dataclasses.asdict(self.grid)
        return data

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        fields = {f.name: f for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - set(fields))
        if unknown:
            raise ConfigurationError(f'unknown configuration keys: {unknown}')
        for name, value in data.items():
            if name == 'grid':
                data[name] = _grid(value)
                continue
            kind, optional = _field_kind(fields[name])
            if value is None and optional:
                continue
            data[name] = _typed(name, value, kind)
        return cls(**data)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'configuration is not valid JSON: {e}') from e
        if not isinstance(data, dict):
            raise ConfigurationError('configuration must be a JSON object')
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        with open(path, 'r', encoding='utf-8') as f:
            try:
                text = f.read()
            except UnicodeDecodeError as e:
                raise ConfigurationError(f'{path} is not valid UTF-8') from e
        return cls.from_json(text)


def _field_kind(field):
    '''(type, accepts None) of a RunConfig field.'''
    args = [a for a in typing.get_args(field.type) if a is not type(None)]
    return (args[0] if args else field.type), field.default is None


def _typed(name, value, kind):
    # JSON has one number type: integers are accepted for float fields
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, kind) and not (kind is not bool and isinstance(value, bool)):
        return value
    raise ConfigurationError(f'{name} must be {kind.__name__}, got {value!r}')


def _grid(value):
    if value is None or isinstance(value, GridSpec):
        return value
    if not isinstance(value, dict) or not {'lo', 'hi'} <= set(value) <= {'lo', 'hi', 'points'}:
        raise ConfigurationError(f'grid must be {{"lo": ..., "hi": ..., "points": ...}}, got {value!r}')
    return GridSpec(lo=_typed('grid.lo', value['lo'], float), hi=_typed('grid.hi', value['hi'], float),
                    points=_typed('grid.points', value.get('points', 401), int))
