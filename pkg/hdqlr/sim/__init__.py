from hdqlr.sim.dgp import DESIGNS, DgpConfig, Simulation, generate, simulate, toeplitz_factor, true_nuisance
from hdqlr.sim.power import PowerCurve, power_experiment, replication_seed

__all__ = [
    'DESIGNS',
    'DgpConfig',
    'PowerCurve',
    'Simulation',
    'generate',
    'power_experiment',
    'replication_seed',
    'simulate',
    'toeplitz_factor',
    'true_nuisance'
]
