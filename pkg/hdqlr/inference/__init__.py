from hdqlr.inference.baselines import am16_test, ar_test, dml_decision, dml_estimate, dml_test
from hdqlr.inference.estimate import DmlEstimate, dml_from_crossfits
from hdqlr.inference.grid import ThetaGrid, default_grid, resolve_grid
from hdqlr.inference.methods import decide, method_config, prepare, region, run_region, run_test
from hdqlr.inference.procedure import (
    ConfidenceRegion,
    TestOutcome,
    confidence_interval,
    decide_from_crossfits,
    region_from_crossfits
)
from hdqlr.inference.qlr import VAR_FLOOR, critical_value, h_process, r_statistic

__all__ = [
    'VAR_FLOOR',
    'ConfidenceRegion',
    'DmlEstimate',
    'TestOutcome',
    'ThetaGrid',
    'am16_test',
    'ar_test',
    'confidence_interval',
    'critical_value',
    'decide',
    'decide_from_crossfits',
    'default_grid',
    'dml_decision',
    'dml_estimate',
    'dml_from_crossfits',
    'dml_test',
    'h_process',
    'method_config',
    'prepare',
    'r_statistic',
    'region',
    'region_from_crossfits',
    'resolve_grid',
    'run_region',
    'run_test'
]
