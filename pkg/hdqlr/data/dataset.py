# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import logging
import re
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from hdqlr.errors import DataValidationError, ParseError, SchemaError

logger = logging.getLogger(__name__)

MISSING_TOKENS = ('', 'NA', 'NaN', 'nan', 'null')

# pandas reports tokenizer errors by file line (header = line 1)
PARSER_LINE = re.compile(r'line (\d+)')


def _frozen(values, ndim):
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise DataValidationError(f'expected a {ndim}-d array, got shape {arr.shape}')
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    '''Outcome ``y``, binary treatment ``d``, binary instrument ``z`` and
    covariates ``x`` (N x p). Immutable once constructed; arrays are
    read-only, so instances may be shared across worker threads.

    ``intercept`` names the one covariate allowed to be constant.
    '''
    y: np.ndarray
    d: np.ndarray
    z: np.ndarray
    x: np.ndarray
    column_names: Tuple[str, ...]
    outcome_name: str = 'y'
    treatment_name: str = 'd'
    instrument_name: str = 'z'
    intercept: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'y', _frozen(self.y, 1))
        object.__setattr__(self, 'd', _frozen(self.d, 1))
        object.__setattr__(self, 'z', _frozen(self.z, 1))
        object.__setattr__(self, 'x', _frozen(self.x, 2))
        object.__setattr__(self, 'column_names', tuple(str(c) for c in self.column_names))
        self._validate()

    def _validate(self):
        n, p = self.x.shape
        if not (len(self.y) == len(self.d) == len(self.z) == n):
            raise DataValidationError(
                f'length mismatch: y={len(self.y)}, d={len(self.d)}, z={len(self.z)}, x rows={n}')
        if p < 1:
            raise DataValidationError('at least one covariate column is required')
        if len(self.column_names) != p:
            raise DataValidationError(f'{len(self.column_names)} column names for {p} covariates')
        if len(set(self.column_names)) != p:
            raise DataValidationError('duplicate covariate names')

        finite = np.isfinite(self.y) & np.isfinite(self.d) & np.isfinite(self.z)
        finite &= np.isfinite(self.x).all(axis=1)
        if not finite.all():
            raise DataValidationError('non-finite values', rows=np.flatnonzero(~finite) + 1)

        for name, values in ((self.treatment_name, self.d), (self.instrument_name, self.z)):
            bad = (values != 0.0) & (values != 1.0)
            if bad.any():
                raise DataValidationError(f'{name} must be binary (0/1)', rows=np.flatnonzero(bad) + 1)

        constant = np.ptp(self.x, axis=0) == 0.0
        if n > 1 and constant.any():
            names = [c for c, flag in zip(self.column_names, constant) if flag and c != self.intercept]
            if names:
                raise DataValidationError(f'constant covariate columns {names}; '
                                          'flag one as intercept or drop it')

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def p(self):
        return self.x.shape[1]

    def schema(self):
        return ColumnSchema(outcome=self.outcome_name, treatment=self.treatment_name,
                            instrument=self.instrument_name, covariates=self.column_names,
                            intercept=self.intercept)

    def with_covariates(self, x, column_names):
        return Dataset(y=self.y, d=self.d, z=self.z, x=x, column_names=column_names,
                       outcome_name=self.outcome_name, treatment_name=self.treatment_name,
                       instrument_name=self.instrument_name, intercept=self.intercept)

    def subset(self, rows):
        rows = np.asarray(rows)
        return Dataset(y=self.y[rows], d=self.d[rows], z=self.z[rows], x=self.x[rows],
                       column_names=self.column_names, outcome_name=self.outcome_name,
                       treatment_name=self.treatment_name, instrument_name=self.instrument_name,
                       intercept=self.intercept)

    def to_frame(self):
        frame = pd.DataFrame(self.x, columns=list(self.column_names))
        frame.insert(0, self.instrument_name, self.z)
        frame.insert(0, self.treatment_name, self.d)
        frame.insert(0, self.outcome_name, self.y)
        return frame


@dataclass(frozen=True)
class ColumnSchema:
    outcome: str
    treatment: str
    instrument: str
    covariates: Tuple[str, ...] = field(default_factory=tuple)
    intercept: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'covariates', tuple(self.covariates))
        if not self.covariates:
            raise SchemaError('schema must name at least one covariate column')
        roles = [self.outcome, self.treatment, self.instrument, *self.covariates]
        if len(set(roles)) != len(roles):
            raise SchemaError(f'a column is assigned more than one role: {roles}')
        if self.intercept is not None and self.intercept not in self.covariates:
            raise SchemaError(f'intercept {self.intercept!r} is not a covariate')

    def columns(self):
        return [self.outcome, self.treatment, self.instrument, *self.covariates]


def _numeric(frame, column):
    raw = frame[column].astype(str).str.strip()
    missing = raw.isin(MISSING_TOKENS)
    values = pd.to_numeric(raw.where(~missing), errors='coerce')
    bad = values.isna() & ~missing
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
        raise ParseError(f'non-numeric value {raw[bad].iloc[0]!r}', row=row, column=column)
    return values.to_numpy(dtype=np.float64), missing.to_numpy()


def read_frame(path, **kwargs):
    '''``pandas.read_csv`` of a UTF-8 file with malformed input mapped to
    ParseError (bad encoding, ragged rows) and DataValidationError (no
    header). File system errors pass through as OSError.'''
    try:
        return pd.read_csv(path, encoding='utf-8', **kwargs)
    except UnicodeDecodeError as e:
        raise ParseError(f'{path} is not valid UTF-8: {e.reason} at byte {e.start}') from e
    except pd.errors.EmptyDataError as e:
        raise DataValidationError(f'{path} is empty') from e
    except pd.errors.ParserError as e:
        line = PARSER_LINE.search(str(e))
        row = int(line.group(1)) - 1 if line else None
        raise ParseError(f'{path} is not well-formed CSV: {str(e).strip()}', row=row) from e


def load_csv(path, schema):
    '''Read a comma separated UTF-8 file with a header row into a Dataset.

    Row numbers in errors count data rows from 1 (the header is not a row).
    Rows with missing cells are rejected, never imputed.
    '''
    frame = read_frame(path, dtype=str, keep_default_na=False)
    frame.columns = [c.strip() for c in frame.columns]
    if frame.empty:
        raise DataValidationError(f'{path} has a header but no data rows')

    absent = [c for c in schema.columns() if c not in frame.columns]
    if absent:
        raise SchemaError(f'{path}: missing columns {absent}')

    columns = {}
    missing = np.zeros(len(frame), dtype=bool)
    for column in schema.columns():
        columns[column], gaps = _numeric(frame, column)
        missing |= gaps
    if missing.any():
        raise DataValidationError(f'{int(missing.sum())} rows with missing cells',
                                  rows=np.flatnonzero(missing) + 1)

    x = np.column_stack([columns[c] for c in schema.covariates])
    ds = Dataset(y=columns[schema.outcome], d=columns[schema.treatment], z=columns[schema.instrument],
                 x=x, column_names=schema.covariates, outcome_name=schema.outcome,
                 treatment_name=schema.treatment, instrument_name=schema.instrument,
                 intercept=schema.intercept)
    logger.info(f'loaded {path}: N={ds.n}, p={ds.p}')
    return ds


def write_csv(ds, path):
    '''Write ``ds`` so that ``load_csv(path, ds.schema())`` reproduces it.'''
    ds.to_frame().to_csv(path, index=False, float_format='%.17g', encoding='utf-8')
