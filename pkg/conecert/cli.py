"""
Command line front end.

    conecert poly decompose --input zz1bar.json
    conecert op matrix --op A --n 2 --p 1 --q 0
    conecert cone certify --a 3 --n 2 --pmax 2 --qmax 2
    conecert cone sample --a 3 --n 2
    conecert tsm mean --f laguerre:k=0,nu=1 --weight z1bar.json \
        --z 0.3,0.1,0.2,-0.4 --r 1.5
    conecert tsm check-functional-equation --poly z1bar.json --k 1
    conecert tsm demo-noninjectivity --poly z1bar.json
    conecert verify all

Reports are JSON on stdout (or ``--out``); logs go to stderr. Exit codes:
0 success, 1 usage or input error, 2 counterexample, 3 partial result or
tolerance failure.
"""
import argparse
import dataclasses
import logging
import sys

import numpy as np

from .cone import OPERATORS
from .cone import certify_nonharmonic
from .cone import cone_sample
from .cone import cone_vanishing_profile
from .cone import operator_matrix
from .config import Config
from .coordinates import format_point
from .coordinates import parse_point
from .coordinates import random_points
from .exceptions import AliasingError
from .exceptions import ConeCertError
from .exceptions import QuadratureError
from .exceptions import ResourceLimitError
from .exceptions import UsageError
from .harmonic import fischer_decompose
from .laguerre import GaussPoly
from .laguerre import laguerre_phi
from .poly import format_complex
from .poly import parse_complex
from .poly import to_complex
from .polyio import poly_to_dict
from .polyio import read_poly
from .polyio import read_report
from .polyio import write_report
from .tsm import functional_equation_check
from .tsm import noninjectivity_demo
from .tsm import twisted_mean
from .verify import CHECKS
from .verify import run_all

log = logging.getLogger(__name__)

CONFIG_OPTIONS = ('quad_degree', 'compare_degree', 'hermite_degree',
                  'laguerre_points', 'abs_tol', 'rel_tol', 'max_matrix_dim',
                  'max_quad_nodes', 'threads', 'seed')


class _Parser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting, so :func:`run` owns exit codes."""

    def error(self, message):
        raise UsageError(message)


def _complex_value(text):
    try:
        return parse_complex(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError("cannot read complex number '{}'; use forms like 3, "
                         "-5/2, i, 1+i".format(text))


def _json_complex(value):
    return {'re': float(np.real(value)), 'im': float(np.imag(value))}


# ---------------------------------------------------------------------------
# Configuration


def build_config(args):
    """Config from the environment, an optional embedded report config, and
    the command line overrides, in that order."""
    config = Config.from_env()
    if args.config:
        document = read_report(args.config)
        embedded = document.get('config', document) \
            if isinstance(document, dict) else document
        config = dataclasses.replace(Config.from_dict(embedded), out=None)
    overrides = {name: getattr(args, name) for name in CONFIG_OPTIONS}
    overrides['out'] = args.out
    if args.verbose:
        overrides['verbosity'] = args.verbose
    return config.replace(**overrides)


def configure_logging(config):
    logging.basicConfig(level=config.log_level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s',
                        force=True)


def _common_options():
    common = _Parser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for progress and info, -vv for debug")
    common.add_argument('--out', help="write the JSON report here")
    common.add_argument('--config',
                        help="re-run with the config embedded in a report")
    common.add_argument('--quad-degree', dest='quad_degree', type=int)
    common.add_argument('--compare-degree', dest='compare_degree', type=int)
    common.add_argument('--hermite-degree', dest='hermite_degree', type=int)
    common.add_argument('--laguerre-points', dest='laguerre_points', type=int)
    common.add_argument('--abs-tol', dest='abs_tol', type=float)
    common.add_argument('--rel-tol', dest='rel_tol', type=float)
    common.add_argument('--max-matrix-dim', dest='max_matrix_dim', type=int)
    common.add_argument('--max-quad-nodes', dest='max_quad_nodes', type=int)
    common.add_argument('--threads', type=int)
    common.add_argument('--seed', type=int)
    return common


# ---------------------------------------------------------------------------
# Commands


def poly_decompose(args, config):
    P = read_poly(args.input)
    decomposition = fischer_decompose(P)
    return {'command': 'poly decompose',
            'input': poly_to_dict(P),
            'decomposition': decomposition.to_dict(),
            'config': config.to_dict()}, 0


def op_matrix(args, config):
    a = _complex_value(args.a) if args.a is not None else None
    matrix = operator_matrix(args.n, args.p, args.q, args.op, a=a, s=args.s)
    report = {'command': 'op matrix',
              'matrix': matrix.to_dict(),
              'rank': matrix.rank(),
              'kernel_dimension': matrix.kernel_dimension(),
              'config': config.to_dict()}
    if matrix.is_square():
        report['nilpotency'] = matrix.nilpotency_index()
        report['invertible'] = matrix.is_invertible()
    if a is not None:
        report['a'] = format_complex(a)
    return report, 0


def cone_certify(args, config):
    certificate = certify_nonharmonic(_complex_value(args.a), args.n,
                                      args.pmax, args.qmax, s=args.s,
                                      config=config)
    log.info("kernel table:\n%s", certificate.kernel_table().to_string())
    report = certificate.to_dict()
    report['command'] = 'cone certify'
    return report, certificate.exit_code


def cone_sample_command(args, config):
    a = to_complex(_complex_value(args.a))
    sample = cone_sample(a, args.n, count=args.count)
    report = {'command': 'cone sample',
              'a': _json_complex(a),
              'n': args.n,
              'slopes': [_json_complex(t) for t in sample.slopes],
              'points': [format_point(z) for z in sample.points],
              'max_residual': (float(np.max(sample.residuals()))
                               if not sample.empty else None),
              'reason': sample.reason,
              'config': config.to_dict()}
    if args.n == 2 and not sample.empty:
        report['hopf'] = [h.to_dict() for h in sample.hopf_coordinates()]
    if args.profile:
        p, q = args.profile
        report['profile'] = cone_vanishing_profile(a, p, q, n=args.n).to_dict()
    return report, 0


def _parse_function(text, n=None):
    """'laguerre:k=2,nu=1', 'poly:<file>' or 'gausspoly:<file>' -> (f, n)."""
    kind, _, body = text.partition(':')
    if kind == 'laguerre':
        try:
            params = dict(part.split('=') for part in body.split(',') if part)
            k, nu = int(params['k']), int(params['nu'])
        except (KeyError, ValueError):
            raise UsageError("laguerre functions are written "
                             "'laguerre:k=<int>,nu=<int>', got '{}'".format(text))
        n = nu + 1 if n is None else n
        return laguerre_phi(k, nu, n), n
    if kind == 'poly':
        P = read_poly(body)
        return P.evaluate, P.n
    if kind == 'gausspoly':
        g = GaussPoly(read_poly(body))
        return g, g.n
    raise UsageError("unknown function '{}'; expected laguerre:, poly: or "
                     "gausspoly:".format(text))


def tsm_mean(args, config):
    weight = read_poly(args.weight) if args.weight else None
    n = args.n if args.n else (weight.n if weight is not None else None)
    f, n = _parse_function(args.f, n)
    if weight is not None and weight.n != n:
        raise UsageError("the weight lives on C^{} but f on C^{}"
                         .format(weight.n, n))
    z = parse_point(args.z, n)
    mean = twisted_mean(f, z, args.r, weight=weight,
                        degree=config.quad_degree,
                        compare_degree=config.compare_degree,
                        max_nodes=config.max_quad_nodes)
    report = mean.to_dict()
    report.update({'command': 'tsm mean', 'f': args.f, 'z': format_point(z),
                   'r': args.r,
                   'weight': poly_to_dict(weight) if weight is not None
                   else None,
                   'config': config.to_dict()})
    tolerance = max(config.abs_tol, config.rel_tol * abs(mean.value))
    if mean.err_est > tolerance:
        log.warning("quadrature error estimate %.3g exceeds %.3g",
                    mean.err_est, tolerance)
        return report, 3
    return report, 0


def _sample_points(args, n, config):
    if args.z:
        return np.array([parse_point(text, n) for text in args.z])
    points = random_points(np.random.default_rng(config.seed), 8, n, 1.5)
    points[:, 0] += 0.3
    return points


def tsm_functional_equation(args, config):
    P = read_poly(args.poly)
    points = _sample_points(args, P.n, config)
    summary, table = functional_equation_check(P, args.k, points, args.r,
                                               n=P.n, config=config)
    samples = [{'z': format_point(row.z), 'r': row.r,
                'value': _json_complex(row.value),
                'err_est': row.err_est,
                'ratio': (_json_complex(row.ratio)
                          if not summary.vanishing_branch else None)}
               for row in table.itertuples()]
    passed = summary.passed(config.abs_tol, config.rel_tol)
    return {'command': 'tsm check-functional-equation',
            'polynomial': poly_to_dict(P),
            'summary': summary.to_dict(),
            'passed': passed,
            'samples': samples,
            'config': config.to_dict()}, 0 if passed else 3


def tsm_noninjectivity(args, config):
    P = read_poly(args.poly)
    report = noninjectivity_demo(P, k_values=tuple(args.k),
                                 r_values=tuple(args.r), n=P.n,
                                 a=to_complex(_complex_value(args.a)),
                                 config=config)
    vanishes = report.vanishes_on_zero_set(config.abs_tol)
    sees = report.cone_sees_function()
    return {'command': 'tsm demo-noninjectivity',
            'polynomial': poly_to_dict(P),
            'report': report.to_dict(),
            'vanishes_on_zero_set': vanishes,
            'cone_sees_function': sees,
            'config': config.to_dict()}, 0 if vanishes and sees else 3


def verify_all(args, config):
    report = run_all(config, names=args.only)
    log.info("verification summary:\n%s", report.table().to_string())
    document = report.to_dict()
    document['command'] = 'verify all'
    return document, report.exit_code


# ---------------------------------------------------------------------------
# Parser


def build_parser():
    common = _common_options()
    parser = _Parser(prog='conecert',
                     description="Exact certificates for non-harmonic cones "
                                 "and twisted spherical mean experiments.")
    groups = parser.add_subparsers(dest='group', required=True)

    poly = groups.add_parser('poly', help="bigraded polynomials")
    poly_commands = poly.add_subparsers(dest='command', required=True)
    decompose = poly_commands.add_parser(
        'decompose', parents=[common], help="Fischer decomposition")
    decompose.add_argument('--input', required=True, help="polynomial .json")
    decompose.set_defaults(handler=poly_decompose)

    op = groups.add_parser('op', help="exact operator matrices")
    op_commands = op.add_subparsers(dest='command', required=True)
    matrix = op_commands.add_parser('matrix', parents=[common],
                                    help="matrix of an operator on P_{p,q}")
    matrix.add_argument('--op', required=True, choices=OPERATORS)
    matrix.add_argument('--n', type=int, default=2)
    matrix.add_argument('--p', type=int, required=True)
    matrix.add_argument('--q', type=int, required=True)
    matrix.add_argument('--a', help="cone coefficient, e.g. 3 or 1+i")
    matrix.add_argument('--s', type=int, default=1)
    matrix.set_defaults(handler=op_matrix)

    cone = groups.add_parser('cone', help="the cone H = a z1 zbar2 + |z|^2")
    cone_commands = cone.add_subparsers(dest='command', required=True)
    certify = cone_commands.add_parser('certify', parents=[common],
                                       help="exact non-harmonicity certificate")
    certify.add_argument('--a', required=True)
    certify.add_argument('--n', type=int, default=2)
    certify.add_argument('--pmax', type=int, required=True)
    certify.add_argument('--qmax', type=int, required=True)
    certify.add_argument('--s', type=int, default=1)
    certify.set_defaults(handler=cone_certify)
    sample = cone_commands.add_parser('sample', parents=[common],
                                      help="points of the cone")
    sample.add_argument('--a', required=True)
    sample.add_argument('--n', type=int, default=2)
    sample.add_argument('--count', type=int, default=16)
    sample.add_argument('--profile', type=int, nargs=2, metavar=('P', 'Q'),
                        help="also evaluate the basis of H_{p,q} on the sample")
    sample.set_defaults(handler=cone_sample_command)

    tsm = groups.add_parser('tsm', help="twisted spherical means")
    tsm_commands = tsm.add_subparsers(dest='command', required=True)
    mean = tsm_commands.add_parser('mean', parents=[common],
                                   help="one (weighted) twisted mean")
    mean.add_argument('--f', required=True,
                      help="laguerre:k=..,nu=.. | poly:<file> | "
                           "gausspoly:<file>")
    mean.add_argument('--weight', help="polynomial weight .json")
    mean.add_argument('--z', required=True, help="re1,im1,re2,im2,...")
    mean.add_argument('--r', type=float, required=True)
    mean.add_argument('--n', type=int)
    mean.set_defaults(handler=tsm_mean)
    equation = tsm_commands.add_parser(
        'check-functional-equation', aliases=['check-lemma42'],
        parents=[common], help="factorisation of the weighted means")
    equation.add_argument('--poly', required=True, help="harmonic weight .json")
    equation.add_argument('--k', type=int, required=True)
    equation.add_argument('--z', action='append',
                          help="sample point; repeat for more")
    equation.add_argument('--r', type=float, nargs='+',
                          default=[0.5, 1.0, 1.5, 2.0])
    equation.set_defaults(handler=tsm_functional_equation)
    demo = tsm_commands.add_parser('demo-noninjectivity', parents=[common],
                                   help="means on the zero set and on the cone")
    demo.add_argument('--poly', required=True, help="harmonic weight .json")
    demo.add_argument('--a', default='3')
    demo.add_argument('--k', type=int, nargs='+', default=[0, 1, 2, 3])
    demo.add_argument('--r', type=float, nargs='+',
                      default=[0.5, 1.0, 1.5, 2.0])
    demo.set_defaults(handler=tsm_noninjectivity)

    verify = groups.add_parser('verify', help="acceptance suite")
    verify_commands = verify.add_subparsers(dest='command', required=True)
    everything = verify_commands.add_parser('all', parents=[common],
                                            help="run every check")
    everything.add_argument('--only', nargs='+',
                            choices=[name for name, _, _ in CHECKS])
    everything.set_defaults(handler=verify_all)
    return parser


def run(argv=None):
    """Parses ``argv``, runs the command and returns its exit code."""
    try:
        args = build_parser().parse_args(argv)
        config = build_config(args)
    except SystemExit as done:
        return done.code or 0
    except (ConeCertError, TypeError, ValueError, OSError) as error:
        sys.stderr.write('conecert: {}\n'.format(error))
        return 1
    configure_logging(config)
    try:
        report, code = args.handler(args, config)
    except (ResourceLimitError, QuadratureError, AliasingError) as error:
        log.error("%s", error)
        return 3
    except (ConeCertError, TypeError, ValueError, OSError) as error:
        log.error("%s", error)
        return 1
    write_report(report, config.out)
    return code


def main():
    sys.exit(run())
