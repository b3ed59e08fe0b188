"""
Twisted spherical means and the experiments built on them.

    f x mu_r(z) = integral over |w| = r of f(z - w) e^{(i/2) Im(z . conj(w))}
                  d mu_r(w)

with mu_r the normalized surface measure; the weighted mean f x nu_r uses
d nu_r = P(w) d mu_r(w). Every mean is computed at two quadrature degrees and
the difference is reported as the error estimate.
"""
import logging
from dataclasses import dataclass
from math import factorial
from math import gamma

import numpy as np
import pandas as pd
from scipy.special import jv

from .cone import cone_sample
from .config import Config
from .coordinates import complex_to_real
from .coordinates import hermitian_twist
from .coordinates import real_to_complex
from .exceptions import DegenerateConeError
from .exceptions import QuadratureError
from .laguerre import GaussPoly
from .laguerre import laguerre_function
from .laguerre import laguerre_phi
from .quadrature import complex_space_quadrature
from .quadrature import geodesic_quadrature
from .quadrature import MAX_SPHERE_NODES
from .quadrature import sphere_quadrature

log = logging.getLogger(__name__)

PROFILE_ZERO_TOL = 1e-8


@dataclass(frozen=True)
class MeanReport:
    """:attr value: the mean at the higher degree.
    :attr err_est: |value(high) - value(low)|."""
    value: complex
    rule: dict
    err_est: float

    def to_dict(self):
        return {'value': {'re': float(np.real(self.value)),
                          'im': float(np.imag(self.value))},
                'rule': self.rule,
                'err_est': float(self.err_est)}


def _callable(f):
    if isinstance(f, GaussPoly):
        return f.evaluate
    if callable(f):
        return f
    raise TypeError("expected a GaussPoly or a callable, got {!r}".format(f))


def _twisted_mean_at(func, z, r, weight, degree, n, max_nodes):
    rule = sphere_quadrature(n, degree, max_nodes)
    w = r * rule.nodes
    values = np.asarray(func(z[np.newaxis, :] - w), dtype=np.complex128)
    values = values * np.exp(0.5j * hermitian_twist(z, w))
    if weight is not None:
        values = values * weight.evaluate(w)
    return complex(rule.integrate(values))


def twisted_mean(f, z, r, weight=None, degree=40, compare_degree=48,
                 max_nodes=MAX_SPHERE_NODES):
    """f x mu_r(z), or f x nu_r(z) when a BiPoly ``weight`` is given.

    :param f: GaussPoly or vectorized callable on arrays of shape (N, n).
    :param max_nodes: node budget of each sphere rule.
    """
    if not r > 0:
        raise ValueError("the radius must be positive, got r={}".format(r))
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    func = _callable(f)
    low = _twisted_mean_at(func, z, r, weight, degree, n, max_nodes)
    high = _twisted_mean_at(func, z, r, weight, compare_degree, n, max_nodes)
    return MeanReport(high, {'kind': 'sphere', 'n': n, 'degree': degree,
                             'compare_degree': compare_degree},
                      abs(high - low))


def twist_profile(s, n):
    """Mean of e^{(i/2) Im(z . conj(w))} over |w| = r, with s = r |z| / 2:
    Gamma(n) (2/s)^{n-1} J_{n-1}(s)."""
    s = np.asarray(s, dtype=float)
    safe = np.where(s == 0, 1.0, s)
    value = gamma(n) * (2 / safe) ** (n - 1) * jv(n - 1, safe)
    return np.where(s == 0, 1.0, value)


def twist_taylor(s, n, terms=40):
    """Series of the unweighted twist mean, integrated term by term:
    sum_m (-1)^m s^{2m} / (2m)! * (2m-1)!! / (d (d+2) ... (d+2m-2)),
    d = 2n."""
    d = 2 * n
    total = 0.0
    moment = 1.0
    for m in range(terms):
        if m:
            moment *= (2 * m - 1) / (d + 2 * m - 2)
        total += (-1) ** m * s ** (2 * m) / factorial(2 * m) * moment
    return total


def geodesic_mean(f, pole, t, degree=40, compare_degree=48):
    """Mean of f over {v in the unit sphere : <v, pole> = t}.

    A complex pole of length n is read as a point of R^{2n}; f then receives
    complex points of shape (N, n). A real pole passes real points."""
    pole = np.asarray(pole)
    is_complex = np.iscomplexobj(pole)
    real_pole = complex_to_real(pole) if is_complex else pole.astype(float)
    func = _callable(f)

    def mean_at(deg):
        rule = geodesic_quadrature(real_pole, t, deg)
        points = real_to_complex(rule.nodes) if is_complex else rule.nodes
        return complex(rule.integrate(np.asarray(func(points))))

    low = mean_at(degree)
    high = mean_at(compare_degree)
    return MeanReport(high, {'kind': 'geodesic', 'd': len(real_pole),
                             't': float(t), 'degree': degree,
                             'compare_degree': compare_degree},
                      abs(high - low))


def _twisted_conv_at(f, g, z, points):
    n = len(z)
    rule = complex_space_quadrature(n, points, center=z / 2)
    w = rule.nodes
    values = f.poly.evaluate(z[np.newaxis, :] - w) * g.poly.evaluate(w) \
        * np.exp(0.5j * hermitian_twist(z, w)) \
        * np.exp(-np.sum(np.abs(z) ** 2) / 8)
    return complex(rule.integrate(values))


def twisted_conv(f, g, z, points=30, compare_points=24):
    """f x g(z) = integral over C^n of f(z - w) g(w) e^{(i/2) Im(z . conj(w))}
    dw, for GaussPolys f and g (n <= 2).

    exp(-|z-w|^2/4 - |w|^2/4) = exp(-|w - z/2|^2/2) exp(-|z|^2/8), so the
    Hermite rule is centered at z/2."""
    z = np.asarray(z, dtype=np.complex128)
    if f.n != len(z) or g.n != len(z):
        raise QuadratureError("twisted_conv needs f, g and z on the same C^n")
    high = _twisted_conv_at(f, g, z, points)
    low = _twisted_conv_at(f, g, z, compare_points)
    return MeanReport(high, {'kind': 'complex_space', 'n': len(z),
                             'hermite_degree': points,
                             'compare_degree': compare_points},
                      abs(high - low))


# ---------------------------------------------------------------------------
# Functional equation of the weighted means


@dataclass(frozen=True)
class FunctionalEquationSummary:
    """Weighted means of phi_k^{n-1} against P in H_{p,q}.

    When k >= q they should factor as
        C * r^{2(p+q)} phi_{k-q}^{n+p+q-1}(r) * P(z) phi_{k-q}^{n+p+q-1}(z).
    :attr separability_cv: largest coefficient of variation, over r, of
                           value / (P(z) phi(z)) across the z samples.
    :attr profile_residual: relative misfit of the r profile.
    :attr constant: fitted C.
    :attr max_abs: largest |value|; the whole answer when k < q.
    :attr skipped_radii: r samples at zeros of the r profile, left out of
                         both measures.
    """
    p: int
    q: int
    k: int
    n: int
    vanishing_branch: bool
    max_abs: float
    separability_cv: float
    profile_residual: float
    constant: complex
    samples: int
    skipped_radii: tuple = ()

    def passed(self, abs_tol=1e-8, rel_tol=1e-6):
        if self.vanishing_branch:
            return self.max_abs < abs_tol
        return self.separability_cv < rel_tol and self.profile_residual < rel_tol

    def to_dict(self):
        return {'p': self.p, 'q': self.q, 'k': self.k, 'n': self.n,
                'vanishing_branch': self.vanishing_branch,
                'max_abs': self.max_abs,
                'separability_cv': self.separability_cv,
                'profile_residual': self.profile_residual,
                'constant': {'re': float(np.real(self.constant)),
                             'im': float(np.imag(self.constant))},
                'samples': self.samples,
                'skipped_radii': list(self.skipped_radii)}


def _coefficient_of_variation(values):
    values = np.asarray(values, dtype=np.complex128)
    mean = np.mean(values)
    if mean == 0:
        return float('inf')
    return float(np.sqrt(np.mean(np.abs(values - mean) ** 2)) / abs(mean))


def functional_equation_check(P, k, z_samples, r_samples, n=2, config=None):
    """Samples phi_k^{n-1} x nu_r(z) with d nu_r = P d mu_r and tests its
    factorisation in z and r.

    :returns: (FunctionalEquationSummary, DataFrame of every sample).
    """
    config = config or Config()
    p, q = P.require_bidegree()
    if P.n != n:
        raise ValueError("P lives on C^{} but n={}".format(P.n, n))
    f = laguerre_phi(k, n - 1, n)
    order = n + p + q - 1
    records = []
    for r in r_samples:
        for z in z_samples:
            z = np.asarray(z, dtype=np.complex128)
            report = twisted_mean(f, z, r, weight=P,
                                  degree=config.quad_degree,
                                  compare_degree=config.compare_degree,
                                  max_nodes=config.max_quad_nodes)
            records.append({'z': tuple(z), 'r': float(r),
                            'value': report.value, 'err_est': report.err_est})
    table = pd.DataFrame.from_records(records)
    max_abs = float(table['value'].abs().max()) if len(table) else 0.0
    if k < q:
        table['ratio'] = np.nan
        summary = FunctionalEquationSummary(p, q, k, n, True, max_abs, 0.0, 0.0,
                                            0j, len(table))
        log.info("k=%d < q=%d: max |mean| = %.3g", k, q, max_abs)
        return summary, table

    def z_reference(z):
        z = np.asarray(z, dtype=np.complex128)
        return P.evaluate(z) * laguerre_function(k - q, order, np.linalg.norm(z))

    references = np.array([z_reference(z) for z in table['z']])
    scale = max(1.0, float(np.max(np.abs(references))))
    if np.any(np.abs(references) < 1e-12 * scale):
        raise ValueError("a z sample sits on a zero of P(z) phi(z); "
                         "choose other samples")
    table['ratio'] = table['value'].to_numpy() / references
    radii = np.array(sorted(table['r'].unique()), dtype=float)
    model = radii ** (2 * (p + q)) * laguerre_function(k - q, order, radii)
    # at zeros of the r profile the ratios are rounding noise
    kept = np.abs(model) >= PROFILE_ZERO_TOL * np.max(np.abs(model))
    skipped = tuple(float(r) for r in radii[~kept])
    if not np.any(kept):
        raise ValueError("every r sample sits on a zero of the radial profile")
    if skipped:
        log.info("skipping r = %s: zeros of the radial profile", skipped)
    cvs = []
    measured = []
    for r in radii[kept]:
        ratios = table.loc[table['r'] == r, 'ratio']
        cvs.append(_coefficient_of_variation(ratios))
        measured.append(np.mean(ratios.to_numpy()))
    model = model[kept]
    measured = np.array(measured, dtype=np.complex128)
    constant = complex(np.vdot(model, measured) / np.vdot(model, model))
    residual = float(np.max(np.abs(measured - constant * model))
                     / max(np.max(np.abs(measured)), 1e-300))
    summary = FunctionalEquationSummary(p, q, k, n, False, max_abs,
                                        float(max(cvs)), residual, constant,
                                        len(table), skipped)
    log.info("(p,q,k)=(%d,%d,%d): cv %.3g, residual %.3g, constant %s",
             p, q, k, summary.separability_cv, residual, constant)
    return summary, table


# ---------------------------------------------------------------------------
# Injectivity dichotomy


@dataclass(frozen=True)
class NoninjectivityReport:
    """:attr zero_set_max: largest |phi_k x nu_r(z)| over z with P(z) = 0.
    :attr cone_max: largest |phi_k x nu_r(z)| over the cone samples."""
    zero_set_max: float
    cone_max: float
    zero_points: int
    cone_points: int
    k_values: tuple
    r_values: tuple

    def vanishes_on_zero_set(self, abs_tol=1e-8):
        return self.zero_set_max < abs_tol

    def cone_sees_function(self, threshold=1e-3):
        return self.cone_max > threshold

    def to_dict(self):
        return {'zero_set_max': self.zero_set_max,
                'cone_max': self.cone_max,
                'zero_points': self.zero_points,
                'cone_points': self.cone_points,
                'k_values': list(self.k_values),
                'r_values': list(self.r_values)}


def zero_set_samples(P, count=6):
    """Points (0, w, 0, ...) with w on a fixed grid; P must vanish there."""
    n = P.n
    points = np.zeros((count, n), dtype=np.complex128)
    points[:, 1] = 0.4 * (1 + np.arange(count)) * np.exp(
        2j * np.pi * np.arange(count) / max(count, 1))
    if np.max(np.abs(P.evaluate(points))) > 1e-12:
        raise ValueError("P does not vanish on {z1 = 0}; pass zero_points")
    return points


def _max_mean(P, points, k_values, r_values, n, config):
    largest = 0.0
    for k in k_values:
        f = laguerre_phi(k, n - 1, n)
        for r in r_values:
            for z in points:
                value = twisted_mean(f, z, r, weight=P,
                                     degree=config.quad_degree,
                                     compare_degree=config.compare_degree,
                                     max_nodes=config.max_quad_nodes).value
                largest = max(largest, abs(value))
    return largest


def noninjectivity_demo(P, k_values=(0, 1, 2, 3), cone_points=None,
                        zero_points=None, r_values=(0.5, 1.0, 1.5, 2.0), n=2,
                        a=3, config=None):
    """Weighted means vanish where P does, and do not on the cone of H.

    :param cone_points: defaults to cone_sample(a, n) base points.
    :param zero_points: defaults to :func:`zero_set_samples`.
    """
    config = config or Config()
    if cone_points is None:
        cone_points = cone_sample(a, n, count=4).points
    cone_points = np.asarray(cone_points, dtype=np.complex128)
    if len(cone_points) == 0:
        raise DegenerateConeError("no cone points to test")
    if zero_points is None:
        zero_points = zero_set_samples(P)
    zero_points = np.asarray(zero_points, dtype=np.complex128)
    report = NoninjectivityReport(
        zero_set_max=_max_mean(P, zero_points, k_values, r_values, n, config),
        cone_max=_max_mean(P, cone_points, k_values, r_values, n, config),
        zero_points=len(zero_points), cone_points=len(cone_points),
        k_values=tuple(k_values), r_values=tuple(float(r) for r in r_values))
    log.info("zero set max %.3g, cone max %.3g", report.zero_set_max,
             report.cone_max)
    return report
