# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Replication configs: which CSV columns play which role, and how the
covariates are expanded before inference.'''

import json
from dataclasses import dataclass
from typing import Optional, Tuple

from hdqlr.data.dataset import ColumnSchema, load_csv
from hdqlr.data.features import FeatureExpansionSpec, expand_features
from hdqlr.errors import SchemaError


@dataclass(frozen=True)
class ReplicationConfig:
    schema: ColumnSchema
    expansion: FeatureExpansionSpec
    name: str = ''
    k_folds: Optional[int] = None
    reps: Optional[int] = None
    expected_ci: Optional[Tuple[float, float]] = None

    def load(self, path, max_columns=10_000):
        return expand_features(load_csv(path, self.schema), self.expansion, max_columns=max_columns)


def load_replication_config(path):
    '''Parse a replication config::

        {"outcome": ..., "treatment": ..., "instrument": ...,
         "covariates": [...], "expansion": {"degree": 2, "interactions": true}}

    Optional keys: name, intercept, k_folds, reps, expected_ci, and
    expansion.base (the covariates to expand; all by default).
    '''
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except ValueError as e:
            # JSONDecodeError and UnicodeDecodeError
            raise SchemaError(f'{path}: not valid JSON: {e}') from e
    if not isinstance(data, dict):
        raise SchemaError(f'{path}: replication config must be a JSON object')

    covariates = data.get('covariates')
    if not isinstance(covariates, list) or not all(isinstance(c, str) for c in covariates):
        raise SchemaError(f'{path}: covariates must be a list of column names')
    try:
        schema = ColumnSchema(outcome=data['outcome'], treatment=data['treatment'],
                              instrument=data['instrument'], covariates=covariates,
                              intercept=data.get('intercept'))
    except KeyError as e:
        raise SchemaError(f'{path}: replication config lacks key {e}') from e

    expansion = data.get('expansion') or {}
    base = expansion.get('base')
    if base is not None:
        unknown = [b for b in base if b not in schema.covariates]
        if unknown:
            raise SchemaError(f'{path}: expansion base columns {unknown} are not covariates')
        base = tuple(schema.covariates.index(b) for b in base)
    try:
        spec = FeatureExpansionSpec(base_columns=base, degree=int(expansion.get('degree', 1)),
                                    include_interactions=bool(expansion.get('interactions', False)))
    except (TypeError, ValueError) as e:
        raise SchemaError(f'{path}: malformed expansion {expansion!r}') from e

    expected = data.get('expected_ci')
    return ReplicationConfig(schema=schema, expansion=spec, name=data.get('name', ''),
                             k_folds=data.get('k_folds'), reps=data.get('reps'),
                             expected_ci=tuple(expected) if expected else None)
