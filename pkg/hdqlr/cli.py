# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

'''Command line front end.

    hdqlr simulate --n 500 --dim-x 200 --p-at 0.45 --p-nt 0.45 --out weak.csv
    hdqlr test weak.csv --theta0 1.0
    hdqlr ci data.csv --replication configs/railroad_1849_71.json
    hdqlr power --design strong --dim-x 5 --reps 500 --methods hdqlr,am16,dml,dml_nocf --out power.csv

Results go to stdout (or ``--out``) as JSON, CSV for ``power``; logs go to
stderr. Exit status is 0 on success whatever the test decides, 2 for
configuration and input errors, 3 for file system errors and 4 for
numerical or statistical failures, reported as a JSON error document.
'''

import argparse
import json
import logging
import os
import sys

import numpy as np

from hdqlr import __version__
from hdqlr.config import INNER, METHODS, STATISTICS, GridSpec, RunConfig
from hdqlr.data import ColumnSchema, load_csv, load_replication_config, read_frame, write_csv
from hdqlr.errors import ConfigurationError, HdqlrError
from hdqlr.inference import decide, prepare, region
from hdqlr.sim import DESIGNS, DgpConfig, power_experiment, simulate

logger = logging.getLogger(__name__)

IO_EXIT_CODE = 3
SKIPPED = 'SKIPPED-NO-DATA'
REPLICATION_TOLERANCE = 0.005
DEFAULT_THETAS = '0,0.25,0.5,0.75,1,1.25,1.5,1.75,2'


def _csv_list(text, convert=str):
    try:
        return [convert(item.strip()) for item in text.split(',') if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'malformed list {text!r}: {e}') from e


def _add_run_flags(parser):
    group = parser.add_argument_group('inference')
    group.add_argument('--config', help='JSON run configuration; flags override it')
    group.add_argument('--method', choices=METHODS)
    group.add_argument('--k-folds', type=int)
    group.add_argument('--alpha', type=float)
    group.add_argument('--lambda-scale', type=float)
    group.add_argument('--grid', type=float, nargs=2, metavar=('LO', 'HI'))
    group.add_argument('--grid-points', type=int)
    group.add_argument('--draws', type=int)
    group.add_argument('--clip-epsilon', type=float)
    group.add_argument('--statistic', choices=STATISTICS)
    group.add_argument('--inner', choices=INNER)
    group.add_argument('--unpenalized-intercept', action='store_true', default=None)
    group.add_argument('--no-standardize', dest='standardize', action='store_false', default=None)
    group.add_argument('--paper-scale', action='store_true', default=None)
    group.add_argument('--seed', type=int)
    group.add_argument('--jobs', dest='n_jobs', type=int)


def _add_data_flags(parser):
    parser.add_argument('data', help='CSV file with a header row')
    group = parser.add_argument_group('columns')
    group.add_argument('--replication', help='replication config naming columns and expansion')
    group.add_argument('--outcome', default='y')
    group.add_argument('--treatment', default='d')
    group.add_argument('--instrument', default='z')
    group.add_argument('--covariates', type=_csv_list,
                       help='comma separated covariate columns (default: every other column)')
    group.add_argument('--intercept', help='covariate allowed to be constant')
    parser.add_argument('--reps', type=int, help='cross-fitting repetitions')
    parser.add_argument('--skip-missing', action='store_true',
                        help=f'report {SKIPPED} instead of failing when DATA does not exist')
    parser.add_argument('--diagnostics', metavar='PATH', help='write per-fold penalties and supports as JSON')
    parser.add_argument('--out', help='write the result here instead of stdout')


def run_config(args, **extra):
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {name: getattr(args, name, None)
                 for name in ('method', 'k_folds', 'alpha', 'lambda_scale', 'draws', 'clip_epsilon',
                              'statistic', 'inner', 'unpenalized_intercept', 'standardize',
                              'paper_scale', 'seed', 'n_jobs')}
    overrides.update(extra)
    if args.grid is not None:
        lo, hi = args.grid
        overrides['grid'] = GridSpec(lo, hi, args.grid_points or 401)
    elif args.grid_points is not None:
        raise ConfigurationError('--grid-points needs --grid')
    return cfg.replace(**{k: v for k, v in overrides.items() if v is not None})


def _load_dataset(args, cfg):
    if args.replication:
        replication = load_replication_config(args.replication)
        return replication.load(args.data, max_columns=cfg.max_columns), replication
    covariates = args.covariates
    if covariates is None:
        header = read_frame(args.data, nrows=0).columns
        roles = {args.outcome, args.treatment, args.instrument}
        covariates = [c.strip() for c in header if c.strip() not in roles]
    schema = ColumnSchema(outcome=args.outcome, treatment=args.treatment, instrument=args.instrument,
                          covariates=covariates, intercept=args.intercept)
    return load_csv(args.data, schema), None


def _emit(document, out=None):
    text = json.dumps(document, indent=2, allow_nan=False)
    if out:
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
    else:
        print(text)


def _write_diagnostics(path, cfg, crossfits):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump({'method': cfg.method, 'repetitions': [cf.diagnostics() for cf in crossfits]}, f, indent=2)


def _inference_inputs(args, command):
    if args.skip_missing and not os.path.exists(args.data):
        logger.warning(f'{args.data} does not exist; skipping')
        _emit({'status': SKIPPED, 'data': args.data}, args.out)
        return None
    extra = {}
    cfg = run_config(args)
    ds, replication = _load_dataset(args, cfg)
    if replication is not None:
        if args.k_folds is None and replication.k_folds is not None:
            extra['k_folds'] = replication.k_folds
        if args.reps is None and replication.reps is not None:
            extra['reps'] = replication.reps
    if args.reps is not None:
        extra['reps'] = args.reps
    cfg, crossfits = prepare(ds, cfg.replace(**extra), command)
    if args.diagnostics:
        _write_diagnostics(args.diagnostics, cfg, crossfits)
    return cfg, crossfits, replication


def cmd_simulate(args):
    if args.design is not None:
        design = DgpConfig.from_design(args.design, n=args.n, dim_x=args.dim_x, u=args.u, seed=args.seed,
                                       outcome=args.outcome, instrument=args.instrument)
    else:
        design = DgpConfig(n=args.n, dim_x=args.dim_x, p_at=args.p_at, p_nt=args.p_nt, u=args.u,
                           seed=args.seed, outcome=args.outcome, instrument=args.instrument)
    sim = simulate(design)
    write_csv(sim.dataset, args.out)
    ds = sim.dataset
    _emit({'out': args.out, 'design_id': design.design_id(), 'n': ds.n, 'p': ds.p,
           'complier_share': sim.complier_share(), 'treated_share': float(np.mean(ds.d)),
           'instrument_share': float(np.mean(ds.z)), 'seed': design.seed})
    return 0


def cmd_test(args):
    inputs = _inference_inputs(args, 'test')
    if inputs is None:
        return 0
    cfg, crossfits, _ = inputs
    outcome = decide(cfg, crossfits, args.theta0)
    _emit(outcome.to_dict(), args.out)
    return 0


def cmd_ci(args):
    inputs = _inference_inputs(args, 'ci')
    if inputs is None:
        return 0
    cfg, crossfits, replication = inputs
    result = region(cfg, crossfits)
    document = result.to_dict()
    if replication is not None and replication.expected_ci is not None:
        expected = list(replication.expected_ci)
        matches = (len(result.intervals) == 1
                   and all(abs(got - want) <= REPLICATION_TOLERANCE
                           for got, want in zip(result.intervals[0], expected)))
        document['replication'] = {'name': replication.name, 'expected_ci': expected,
                                   'tolerance': REPLICATION_TOLERANCE, 'matches': bool(matches)}
    _emit(document, args.out)
    return 0


def cmd_power(args):
    cfg = run_config(args, reps=args.crossfit_reps)
    if args.design is not None:
        design = DgpConfig.from_design(args.design, n=args.n, dim_x=args.dim_x, u=args.u,
                                       seed=cfg.seed, outcome=args.outcome, instrument=args.instrument)
    else:
        design = DgpConfig(n=args.n, dim_x=args.dim_x, p_at=args.p_at, p_nt=args.p_nt, u=args.u,
                           seed=cfg.seed, outcome=args.outcome, instrument=args.instrument)
    resolved = cfg.resolved('test')
    reps = args.reps if args.reps is not None else resolved.replications
    curve = power_experiment(design, args.methods, args.thetas, reps, cfg)
    if args.out:
        curve.to_csv(args.out)
    else:
        curve.to_csv(sys.stdout)
    return 0


def _add_design_flags(parser, seed=True):
    group = parser.add_argument_group('design')
    group.add_argument('--design', choices=sorted(DESIGNS), help='preset (p_at, p_nt)')
    group.add_argument('--n', type=int, default=500)
    group.add_argument('--dim-x', type=int, default=5)
    group.add_argument('--p-at', type=float, default=0.25)
    group.add_argument('--p-nt', type=float, default=0.25)
    group.add_argument('--u', type=float, default=0.5)
    group.add_argument('--outcome', choices=('first', 'sum'), default='first')
    group.add_argument('--instrument', choices=('latent_sign', 'independent'), default='latent_sign')
    if seed:
        group.add_argument('--seed', type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog='hdqlr', description=__doc__.split('\n')[0])
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v info, -vv debug')
    commands = parser.add_subparsers(dest='command', required=True)

    sim = commands.add_parser('simulate', help='write a simulated dataset')
    _add_design_flags(sim)
    sim.add_argument('--out', required=True)
    sim.set_defaults(handler=cmd_simulate)

    test = commands.add_parser('test', help='test H0: LATE = theta0')
    _add_data_flags(test)
    test.add_argument('--theta0', type=float, required=True)
    _add_run_flags(test)
    test.set_defaults(handler=cmd_test)

    ci = commands.add_parser('ci', help='confidence region by test inversion')
    _add_data_flags(ci)
    _add_run_flags(ci)
    ci.set_defaults(handler=cmd_ci)

    power = commands.add_parser('power', help='Monte Carlo rejection rates as tidy CSV')
    _add_design_flags(power, seed=False)
    _add_run_flags(power)
    power.add_argument('--reps', type=int,
                       help='Monte Carlo replications (default 500, 2500 with --paper-scale)')
    power.add_argument('--crossfit-reps', type=int, help='cross-fitting repetitions per replication')
    power.add_argument('--methods', type=_csv_list, default=['hdqlr'])
    power.add_argument('--thetas', type=lambda s: _csv_list(s, float),
                       default=_csv_list(DEFAULT_THETAS, float))
    power.add_argument('--out')
    power.set_defaults(handler=cmd_power)
    return parser


def configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s')


def _error_document(error, exit_code):
    return {'error': type(error).__name__, 'message': str(error), 'exit_code': exit_code}


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except HdqlrError as e:
        logger.error(f'{type(e).__name__}: {e}')
        print(json.dumps(_error_document(e, e.exit_code)))
        return e.exit_code
    except OSError as e:
        logger.error(f'{type(e).__name__}: {e}')
        print(json.dumps(_error_document(e, IO_EXIT_CODE)))
        return IO_EXIT_CODE


if __name__ == '__main__':
    sys.exit(main())
