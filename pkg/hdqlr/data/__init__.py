from hdqlr.data.dataset import ColumnSchema, Dataset, load_csv, read_frame, write_csv
from hdqlr.data.features import FeatureExpansionSpec, expand_features
from hdqlr.data.folds import FoldAssignment, assign_folds, single_fold
from hdqlr.data.replication import ReplicationConfig, load_replication_config

__all__ = [
    'ColumnSchema',
    'Dataset',
    'FeatureExpansionSpec',
    'FoldAssignment',
    'ReplicationConfig',
    'assign_folds',
    'expand_features',
    'load_csv',
    'load_replication_config',
    'read_frame',
    'single_fold',
    'write_csv'
]
