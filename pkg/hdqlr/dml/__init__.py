from hdqlr.dml.crossfit import CrossfitResult, KernelMoments, omega, q_hat, repeat_crossfit, run_crossfit
from hdqlr.dml.nuisance import FitDiagnostics, fit_nuisance
from hdqlr.dml.score import (
    DEFAULT_CLIP_EPSILON,
    NuisanceFit,
    ScoreDecomposition,
    evaluate_score,
    late_point_estimand,
    point_estimate
)

__all__ = [
    'DEFAULT_CLIP_EPSILON',
    'CrossfitResult',
    'FitDiagnostics',
    'KernelMoments',
    'NuisanceFit',
    'ScoreDecomposition',
    'evaluate_score',
    'fit_nuisance',
    'late_point_estimand',
    'omega',
    'point_estimate',
    'q_hat',
    'repeat_crossfit',
    'run_crossfit'
]
