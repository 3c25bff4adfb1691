from hdqlr import data, dml, inference, lasso, sim
from hdqlr.config import GridSpec, RunConfig
from hdqlr.errors import HdqlrError


__version__ = "0.1.0"

__all__ = [
    'GridSpec',
    'HdqlrError',
    'RunConfig',
    'data',
    'dml',
    'inference',
    'lasso',
    'sim'
]
