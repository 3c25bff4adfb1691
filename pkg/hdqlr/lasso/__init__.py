from hdqlr.lasso.solvers import (
    BINOMIAL,
    GAUSSIAN,
    KKT_TOLERANCE,
    LassoProblem,
    LassoSolution,
    default_penalty,
    kkt_violation,
    penalized_objective,
    solve,
    solve_lasso_logit,
    solve_lasso_ols,
    write_trace
)
from hdqlr.lasso.unpenalized import UnpenalizedFit, fit_logit, fit_ols

__all__ = [
    'BINOMIAL',
    'GAUSSIAN',
    'KKT_TOLERANCE',
    'LassoProblem',
    'LassoSolution',
    'UnpenalizedFit',
    'default_penalty',
    'fit_logit',
    'fit_ols',
    'kkt_violation',
    'penalized_objective',
    'solve',
    'solve_lasso_logit',
    'solve_lasso_ols',
    'write_trace'
]
