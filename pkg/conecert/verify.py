"""
The complete acceptance suite behind ``conecert verify all``.

Each check returns a :class:`CheckResult`. Exact checks compare polynomials
and Gaussian rationals with ``==``; numeric checks compare against the
tolerances of the active :class:`conecert.config.Config`. A failed exact check
maps to exit code 2, a failed numeric check to exit code 3.
"""
import logging
import time
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from math import factorial
from typing import Tuple

import numpy as np
import pandas as pd
from scipy.special import eval_gegenbauer
from sympy import QQ
from sympy import Rational

from .config import Config
from .cone import certify_nonharmonic
from .cone import cone_vanishing_profile
from .cone import eigen_residual
from .cone import nilpotency
from .cone import operator_identities
from .cone import operator_matrix
from .coordinates import random_points
from .harmonic import fischer_decompose
from .harmonic import harmonic_basis
from .harmonic import laplacian_identity_residual
from .laguerre import expansion_weight
from .laguerre import laguerre_function
from .laguerre import laguerre_phi
from .laguerre import radial_expand
from .laguerre import radial_synthesis
from .laguerre import weyl_scalar
from .poly import BiPoly
from .poly import exact
from .poly import format_complex
from .quadrature import monte_carlo_table
from .quadrature import validation_table
from .tsm import functional_equation_check
from .tsm import geodesic_mean
from .tsm import noninjectivity_demo
from .tsm import twist_profile
from .tsm import twist_taylor
from .tsm import twisted_conv
from .tsm import twisted_mean
from .utils import progress

log = logging.getLogger(__name__)

EXACT = 'exact'
NUMERIC = 'numeric'
INFO = 'info'

CONE_COEFFICIENTS = (exact(2), exact(3), exact(0, 1), exact(1, 1),
                     exact(Fraction(-5, 2)))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    kind: str
    detail: dict
    seconds: float

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'kind': self.kind,
                'detail': self.detail, 'seconds': round(self.seconds, 3)}


@dataclass(frozen=True)
class VerificationReport:
    results: Tuple[CheckResult, ...]
    config: dict = field(default_factory=dict)

    @property
    def exit_code(self):
        if any(not r.passed and r.kind == EXACT for r in self.results):
            return 2
        if any(not r.passed and r.kind == NUMERIC for r in self.results):
            return 3
        return 0

    @property
    def passed(self):
        return self.exit_code == 0

    def table(self):
        return pd.DataFrame.from_records(
            [(r.name, r.kind, r.passed, r.seconds) for r in self.results],
            columns=['name', 'kind', 'passed', 'seconds'])

    def to_dict(self):
        return {'passed': self.passed,
                'exit_code': self.exit_code,
                'checks': [r.to_dict() for r in self.results],
                'config': self.config}


def _bidegrees(limit):
    return [(p, q) for p in range(limit + 1) for q in range(limit + 1)]


# ---------------------------------------------------------------------------
# Exact checks


def check_laplacian_identity(config, rng):
    failures = []
    count = 0
    for n in (2, 3):
        for p, q in _bidegrees(3):
            for j in range(1, min(p, q) + 1):
                for R in harmonic_basis(n, p - j, q - j):
                    count += 1
                    if not laplacian_identity_residual(R, j).is_zero():
                        failures.append({'n': n, 'p': p, 'q': q, 'j': j,
                                         'R': str(R)})
    return not failures, {'identities': count, 'failures': failures[:5]}


def check_fischer_round_trip(config, rng, samples=100):
    failures = []
    for n in (2, 3):
        for p, q in _bidegrees(3):
            for _ in range(samples):
                P = BiPoly.random(n, p, q, rng)
                decomposition = fischer_decompose(P, (p, q))
                harmonic = all(c.laplacian().is_zero()
                               for c in decomposition.components)
                if decomposition.recompose() != P or not harmonic:
                    failures.append({'n': n, 'p': p, 'q': q, 'P': str(P)})
    return not failures, {'samples_per_space': samples,
                          'failures': failures[:5]}


def _certify_all(config, n_values, limit, s):
    verdicts = []
    passed = True
    for n in n_values:
        for a in CONE_COEFFICIENTS:
            certificate = certify_nonharmonic(a, n, limit, limit, s=s,
                                              config=config)
            ok = certificate.complete and certificate.counterexample is None \
                and certificate.verdict.startswith('non-harmonic')
            passed = passed and ok
            verdicts.append({'a': format_complex(a), 'n': n,
                             'verdict': certificate.verdict})
    return passed, {'s': s, 'range': [limit, limit], 'verdicts': verdicts}


def check_certificates(config, rng):
    return _certify_all(config, (2, 3), 3, s=1)


def check_power_certificates(config, rng):
    return _certify_all(config, (2,), 2, s=2)


def check_operator_identities(config, rng):
    failures = []
    count = 0
    for n in (2, 3):
        for p, q in _bidegrees(3):
            for Q in harmonic_basis(n, p, q):
                count += 1
                first, second = operator_identities(Q)
                if not (first.is_zero() and second.is_zero()):
                    failures.append({'n': n, 'Q': str(Q), 'identity': 'AB'})
                for a in CONE_COEFFICIENTS:
                    if not eigen_residual(Q, a).is_zero():
                        failures.append({'n': n, 'Q': str(Q),
                                         'a': format_complex(a),
                                         'identity': 'eigen'})
    return not failures, {'harmonics': count, 'failures': failures[:5]}


def check_nilpotency(config, rng):
    failures = []
    indices = {}
    for n in (2, 3):
        for p, q in _bidegrees(4):
            index = nilpotency(n, p, q)
            indices['{},{},{}'.format(n, p, q)] = index
            if index is None or index > p + q + 1:
                failures.append({'n': n, 'p': p, 'q': q, 'index': index})
                continue
            for a in CONE_COEFFICIENTS:
                shift = operator_matrix(n, p, q, 'eigen_shift', a=a)
                if not shift.is_invertible():
                    failures.append({'n': n, 'p': p, 'q': q,
                                     'a': format_complex(a),
                                     'eigen_shift': 'singular'})
    return not failures, {'nilpotency': indices, 'failures': failures[:5]}


def check_weyl_scalars(config, rng):
    failures = []
    phases = {}
    for p, q in _bidegrees(2):
        target = QQ(1, 4 ** (p + q))
        for P in harmonic_basis(2, p, q):
            for k in range(5):
                result = weyl_scalar(P, k)
                if k < q:
                    ok = result.vanishes
                else:
                    ok = result.scalar is not None \
                        and result.modulus_squared == target
                    if result.scalar is not None:
                        phases.setdefault('{},{}'.format(p, q), set()).add(
                            format_complex(result.scalar))
                if not ok:
                    failures.append({'p': p, 'q': q, 'k': k, 'P': str(P)})
    return not failures, {'scalars': {key: sorted(values)
                                      for key, values in phases.items()},
                          'failures': failures[:5]}


def check_expansion_weights(config, rng):
    wrong = [(n, k) for n in (1, 2, 3) for k in range(7)
             if expansion_weight(n, k)
             != Rational(factorial(k) * factorial(n - 1), factorial(n + k - 1))]
    return not wrong, {'mismatches': wrong}


# ---------------------------------------------------------------------------
# Numeric checks


def check_vanishing_mean(config, rng):
    P = BiPoly.variable(2, 1, conjugated=True)
    f = laguerre_phi(0, 1, 2)
    points = random_points(rng, 20, 2, 2.0)
    radii = rng.uniform(0.1, 2.0, 20)
    largest = max(abs(twisted_mean(f, z, r, weight=P,
                                   degree=config.quad_degree,
                                   compare_degree=config.compare_degree).value)
                  for z, r in zip(points, radii))
    return largest < config.abs_tol, {'max_abs': largest}


FUNCTIONAL_EQUATION_CASES = (
    ((0, 0), (1, 0), 1),
    ((1, 0), (0, 0), 1),
    ((1, 0), (0, 1), 2),
)


def check_functional_equation(config, rng):
    points = random_points(rng, 8, 2, 1.5)
    points[:, 0] += 0.3
    radii = (0.5, 1.0, 1.5, 2.0)
    summaries = []
    passed = True
    for alpha, beta, k in FUNCTIONAL_EQUATION_CASES:
        P = BiPoly.monomial(alpha, beta)
        summary, _ = functional_equation_check(P, k, points, radii,
                                               config=config)
        passed = passed and summary.passed(config.abs_tol, config.rel_tol)
        summaries.append(summary.to_dict())
    return passed, {'cases': summaries}


def check_twisted_orthogonality(config, rng):
    points = np.array([[0.4 + 0.2j], [-0.7 + 0.5j], [1.1 - 0.3j]])
    worst = 0.0
    for k in range(3):
        for j in range(3):
            f = laguerre_phi(k, 0, 1)
            g = laguerre_phi(j, 0, 1)
            for z in points:
                value = twisted_conv(f, g, z, points=config.hermite_degree,
                                     compare_points=config.hermite_degree - 6
                                     ).value
                expected = 2 * np.pi * f(z) if j == k else 0.0
                worst = max(worst, abs(value - expected) / (2 * np.pi))
    return worst < config.rel_tol, {'max_relative_error': worst}


def check_radial_recovery(config, rng):
    worst = 0.0
    for n in (1, 2, 3):
        for j in range(7):
            expansion = radial_expand(
                lambda radius, j=j: laguerre_function(j, n - 1, radius), 6, n,
                points=config.laguerre_points, tol=config.abs_tol)
            target = np.zeros(7)
            target[j] = 1
            worst = max(worst, float(np.max(np.abs(
                expansion.coefficients - target))))
        coefficients = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        expansion = radial_expand(radial_synthesis(coefficients, n), 6, n,
                                  points=config.laguerre_points,
                                  tol=config.abs_tol)
        worst = max(worst, float(np.max(np.abs(
            expansion.coefficients - coefficients))))
    return worst < config.abs_tol, {'max_abs_error': worst}


def check_dichotomy(config, rng):
    cases = {'z1': BiPoly.variable(2, 1),
             'zbar1': BiPoly.variable(2, 1, conjugated=True),
             'z1 zbar2': BiPoly.variable(2, 1) * BiPoly.variable(2, 2, True)}
    detail = {}
    passed = True
    for name, P in cases.items():
        report = noninjectivity_demo(P, config=config)
        ok = report.vanishes_on_zero_set(config.abs_tol) \
            and report.cone_sees_function(1e-3)
        passed = passed and ok
        detail[name] = report.to_dict()
    return passed, detail


MONTE_CARLO_SAMPLES = 10_000_000


def check_sphere_quadrature(config, rng, samples=MONTE_CARLO_SAMPLES):
    worst = {}
    passed = True
    for n, degree in ((1, 20), (2, 20), (3, 6)):
        table = validation_table(n, degree, compare_degree=degree + 8)
        error = float(table['error'].max())
        gap = float(table['degree_gap'].max())
        worst[n] = {'degree': degree, 'error': error, 'degree_gap': gap}
        passed = passed and error < 1e-12 and gap < 1e-12
        if n > 1:
            oracle = monte_carlo_table(n, degree, samples, rng)
            worst[n]['monte_carlo_error'] = float(oracle['error'].max())
            worst[n]['monte_carlo_samples'] = samples
            passed = passed and worst[n]['monte_carlo_error'] < 1e-3
    return passed, worst


def check_twist_profile(config, rng):
    z = np.array([0.6 + 0.8j, 0.0])
    worst = 0.0
    for r in np.linspace(0.25, 4.0, 8):
        s = r * np.linalg.norm(z) / 2
        mean = twisted_mean(lambda w: np.ones(len(w)), z, r,
                            degree=config.quad_degree,
                            compare_degree=config.compare_degree).value
        worst = max(worst, abs(mean - float(twist_profile(s, 2))),
                    abs(float(twist_profile(s, 2)) - twist_taylor(s, 2)))
    return worst < config.abs_tol, {'max_abs_error': worst}


GEODESIC_SLICES = (0.3, -0.5, -0.7)


def check_geodesic_proportionality(config, rng, slices=GEODESIC_SLICES):
    """Means of the degree-2 harmonic z1 zbar2 over slices of S^3 equal
    C_2(t) / C_2(1) Y(pole), with C_2 the Gegenbauer polynomial of index 1.
    Judged by the residual relative to max |Y(pole)|, which stays meaningful
    at zeros of C_2."""
    Y = BiPoly.variable(2, 1) * BiPoly.variable(2, 2, True)
    poles = random_points(rng, 6, 2, 1.0)
    poles /= np.linalg.norm(poles, axis=1)[:, np.newaxis]
    at_poles = Y.evaluate(poles)
    scale = float(np.max(np.abs(at_poles)))
    detail = {}
    passed = True
    for t in slices:
        factor = float(eval_gegenbauer(2, 1, t) / eval_gegenbauer(2, 1, 1.0))
        means = np.array([
            geodesic_mean(Y.evaluate, pole, t, degree=config.quad_degree,
                          compare_degree=config.compare_degree).value
            for pole in poles])
        residual = float(np.max(np.abs(means - factor * at_poles)) / scale)
        detail[str(t)] = {'factor': factor, 'residual': residual}
        passed = passed and residual < config.rel_tol
    return passed, detail


def check_vanishing_profile(config, rng):
    profiles = [cone_vanishing_profile(3, p, q).to_dict()
                for p, q in ((1, 0), (1, 1), (2, 1))]
    return True, {'profiles': profiles}


CHECKS = (
    ('laplacian-identity', EXACT, check_laplacian_identity),
    ('fischer-round-trip', EXACT, check_fischer_round_trip),
    ('certify-s1', EXACT, check_certificates),
    ('certify-s2', EXACT, check_power_certificates),
    ('operator-identities', EXACT, check_operator_identities),
    ('nilpotency', EXACT, check_nilpotency),
    ('weyl-scalars', EXACT, check_weyl_scalars),
    ('vanishing-mean', NUMERIC, check_vanishing_mean),
    ('functional-equation', NUMERIC, check_functional_equation),
    ('twisted-orthogonality', NUMERIC, check_twisted_orthogonality),
    ('expansion-weights', EXACT, check_expansion_weights),
    ('radial-recovery', NUMERIC, check_radial_recovery),
    ('injectivity-dichotomy', NUMERIC, check_dichotomy),
    ('sphere-quadrature', NUMERIC, check_sphere_quadrature),
    ('twist-profile', NUMERIC, check_twist_profile),
    ('geodesic-proportionality', NUMERIC, check_geodesic_proportionality),
    ('cone-vanishing-profile', INFO, check_vanishing_profile),
)


def run_check(name, kind, check, config, rng):
    start = time.perf_counter()
    passed, detail = check(config, rng)
    seconds = time.perf_counter() - start
    level = logging.INFO if passed else logging.WARNING
    log.log(level, "%s: %s (%.1fs)", name, 'pass' if passed else 'FAIL',
            seconds)
    return CheckResult(name, bool(passed), kind, detail, seconds)


def run_all(config=None, names=None):
    """Runs every check (or those listed in ``names``) with one seeded
    generator, in a fixed order."""
    config = config or Config()
    rng = np.random.default_rng(config.seed)
    selected = [entry for entry in CHECKS if names is None or entry[0] in names]
    results = [run_check(name, kind, check, config, rng)
               for name, kind, check in progress(selected, desc='verify')]
    report = VerificationReport(tuple(results), config.to_dict())
    log.info("verification finished with exit code %d", report.exit_code)
    return report
