#!/usr/bin/env python3

# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import numpy as np
import pandas as pd
import pytest

from hdqlr.data import ColumnSchema, Dataset, load_csv, write_csv
from hdqlr.errors import DataValidationError, ParseError, SchemaError


def make_dataset(n=20, p=3, seed=0):
    gen = np.random.default_rng(seed)
    return Dataset(y=gen.normal(size=n), d=gen.integers(0, 2, n), z=gen.integers(0, 2, n),
                   x=gen.normal(size=(n, p)), column_names=[f'x{j}' for j in range(p)])


def test_dataset_is_read_only():
    ds = make_dataset()
    assert ds.n == 20
    assert ds.p == 3
    with pytest.raises(ValueError):
        ds.x[0, 0] = 1.0


def test_non_binary_treatment_lists_rows():
    ds = make_dataset()
    d = ds.d.copy()
    d[[2, 7]] = 2.0
    with pytest.raises(DataValidationError) as e:
        Dataset(y=ds.y, d=d, z=ds.z, x=ds.x, column_names=ds.column_names)
    assert e.value.rows == (3, 8)


def test_non_finite_values_rejected():
    ds = make_dataset()
    x = ds.x.copy()
    x[4, 1] = np.inf
    with pytest.raises(DataValidationError) as e:
        Dataset(y=ds.y, d=ds.d, z=ds.z, x=x, column_names=ds.column_names)
    assert e.value.rows == (5,)


def test_constant_column_needs_intercept_flag():
    ds = make_dataset()
    x = np.column_stack([np.ones(ds.n), ds.x])
    names = ('const',) + ds.column_names
    with pytest.raises(DataValidationError):
        Dataset(y=ds.y, d=ds.d, z=ds.z, x=x, column_names=names)
    flagged = Dataset(y=ds.y, d=ds.d, z=ds.z, x=x, column_names=names, intercept='const')
    assert flagged.p == 4


def test_schema_rejects_shared_roles():
    with pytest.raises(SchemaError):
        ColumnSchema(outcome='y', treatment='d', instrument='y', covariates=('x0',))
    with pytest.raises(SchemaError):
        ColumnSchema(outcome='y', treatment='d', instrument='z', covariates=())


def test_csv_round_trip():
    ds = make_dataset()
    write_csv(ds, 'data.csv')
    back = load_csv('data.csv', ds.schema())
    np.testing.assert_array_equal(back.x, ds.x)
    np.testing.assert_array_equal(back.y, ds.y)
    assert back.column_names == ds.column_names


def test_missing_column():
    make_dataset().to_frame().drop(columns=['x1']).to_csv('data.csv', index=False)
    schema = ColumnSchema(outcome='y', treatment='d', instrument='z', covariates=('x0', 'x1'))
    with pytest.raises(SchemaError, match='x1'):
        load_csv('data.csv', schema)


def test_non_numeric_cell():
    frame = make_dataset().to_frame().astype(object)
    frame.loc[5, 'x2'] = 'abc'
    frame.to_csv('data.csv', index=False)
    with pytest.raises(ParseError) as e:
        load_csv('data.csv', make_dataset().schema())
    assert e.value.row == 6
    assert e.value.column == 'x2'


def test_missing_cells_are_reported_not_imputed():
    frame = make_dataset().to_frame().astype(object)
    frame.loc[0, 'y'] = 'NA'
    frame.loc[9, 'x0'] = ''
    frame.to_csv('data.csv', index=False)
    with pytest.raises(DataValidationError) as e:
        load_csv('data.csv', make_dataset().schema())
    assert e.value.rows == (1, 10)


def test_ragged_row_is_located():
    with open('data.csv', 'w', encoding='utf-8') as f:
        f.write('y,d,z,x0\n0.5,1,1,0.2\n0.1,0,0,0.3\n0.7,1,0,0.1,9,9\n')
    schema = ColumnSchema(outcome='y', treatment='d', instrument='z', covariates=('x0',))
    with pytest.raises(ParseError) as e:
        load_csv('data.csv', schema)
    assert e.value.row == 3


def test_unreadable_files():
    schema = ColumnSchema(outcome='y', treatment='d', instrument='z', covariates=('x0',))
    with open('data.csv', 'wb') as f:
        f.write(b'y,d,z,x0\n0.5,1,1,0.2\n\xff,0,0,0.1\n')
    with pytest.raises(ParseError, match='UTF-8'):
        load_csv('data.csv', schema)

    open('data.csv', 'w').close()
    with pytest.raises(DataValidationError, match='empty'):
        load_csv('data.csv', schema)

    with open('data.csv', 'w', encoding='utf-8') as f:
        f.write('y,d,z,x0\n')
    with pytest.raises(DataValidationError, match='no data rows'):
        load_csv('data.csv', schema)

    with pytest.raises(OSError):
        load_csv('absent.csv', schema)


def test_subset_keeps_schema():
    ds = make_dataset()
    part = ds.subset([0, 1, 2])
    assert part.n == 3
    assert part.schema() == ds.schema()
    pd.testing.assert_frame_equal(part.to_frame(), ds.to_frame().iloc[:3])


if __name__ == '__main__':
    pytest.main(['-s', '-q', __file__])
