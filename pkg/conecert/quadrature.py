"""
Quadrature rules for the normalized measures used by the twisted means.

* ``sphere``: normalized surface measure on the unit sphere of C^n (n <= 3).
  Built recursively: |z_n|^2 follows Beta(1, n-1), handled by Gauss-Jacobi
  nodes, the phase of z_n by a uniform grid, and the remaining coordinates by
  the rule on the smaller sphere scaled by sqrt(1 - |z_n|^2). For n = 2 these
  are Hopf coordinates with Gauss-Legendre nodes in cos(2 eta).
* ``real_sphere`` and ``geodesic``: normalized measure on S^{d-1} in R^d and
  on its slices {v : <v, pole> = t}.
* ``complex_space``: tensor Gauss-Hermite rule for integrals over C^n against
  exp(-|w - center|^2 / 2).
* ``radial_laguerre``: generalized Gauss-Laguerre rule on the half line.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
import pandas as pd
from scipy.linalg import null_space
from scipy.special import roots_genlaguerre
from scipy.special import roots_hermite
from scipy.special import roots_jacobi

from .exceptions import QuadratureError
from .poly import multi_indices
from .utils import pairwise_sum

log = logging.getLogger(__name__)

MAX_SPHERE_DIMENSION = 3
MAX_DEGREE = 60
MAX_SPHERE_NODES = 2_000_000


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a quadrature rule.

    :attr kind: 'sphere', 'real_sphere', 'geodesic', 'complex_space' or
                'radial_laguerre'.
    :attr nodes: array of shape (N, dim), or (N,) for the radial rule.
    :attr weights: array of shape (N,).
    :attr meta: parameters the rule was built from, for reports.
    """
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.weights)

    def integrate(self, values):
        """Weighted sum of integrand values at the nodes, in fixed order.

        Raises QuadratureError on non-finite values."""
        values = np.asarray(values)
        if not np.all(np.isfinite(values)):
            raise QuadratureError(
                "non-finite integrand values on a {} rule".format(self.kind))
        weighted = self.weights.reshape((-1,) + (1,) * (values.ndim - 1)) \
            * values
        return pairwise_sum(weighted)

    def to_dict(self):
        return dict(kind=self.kind, **self.meta)


def _check_degree(degree):
    if not 0 <= int(degree) <= MAX_DEGREE:
        raise QuadratureError("degree must lie in 0..{}, got {}"
                              .format(MAX_DEGREE, degree))


def _phase_grid(degree):
    size = int(degree) + 1
    return np.exp(2j * np.pi * np.arange(size) / size)


@lru_cache(maxsize=32)
def _sphere_nodes(n, degree):
    if n == 1:
        nodes = _phase_grid(degree)[:, np.newaxis]
        return nodes, np.full(len(nodes), 1.0 / len(nodes))
    inner_nodes, inner_weights = _sphere_nodes(n - 1, degree)
    latitudes = degree // 2 + 1
    x, w = roots_jacobi(latitudes, n - 2, 0)
    u = (1 + x) / 2
    w = w / w.sum()
    phases = _phase_grid(degree)
    outer = np.sqrt(u)[:, np.newaxis] * phases[np.newaxis, :]
    scale = np.sqrt(1 - u)
    # axes: latitude, phase, inner node
    inner = scale[:, np.newaxis, np.newaxis, np.newaxis] \
        * inner_nodes[np.newaxis, np.newaxis, :, :]
    inner = np.broadcast_to(inner, (latitudes, len(phases)) + inner_nodes.shape)
    last = np.broadcast_to(outer[:, :, np.newaxis, np.newaxis],
                           (latitudes, len(phases), len(inner_nodes), 1))
    nodes = np.concatenate([inner, last], axis=-1).reshape(-1, n)
    weights = (w[:, np.newaxis, np.newaxis]
               * np.full(len(phases), 1.0 / len(phases))[np.newaxis, :, np.newaxis]
               * inner_weights[np.newaxis, np.newaxis, :]).reshape(-1)
    return nodes, weights


def sphere_node_count(n, degree):
    """Number of nodes of the degree ``degree`` rule on the sphere of C^n."""
    count = int(degree) + 1
    for _ in range(int(n) - 1):
        count *= (int(degree) // 2 + 1) * (int(degree) + 1)
    return count


def sphere_quadrature(n, degree, max_nodes=MAX_SPHERE_NODES):
    """Product rule for the normalized measure on the unit sphere of C^n.

    Exact for every z^a zbar^b with |a| + |b| <= degree. Rules with more than
    ``max_nodes`` nodes raise QuadratureError before anything is built."""
    if not 1 <= n <= MAX_SPHERE_DIMENSION:
        raise QuadratureError(
            "sphere quadrature supports n in 1..{}, got n={}"
            .format(MAX_SPHERE_DIMENSION, n))
    _check_degree(degree)
    count = sphere_node_count(n, degree)
    if max_nodes is not None and count > max_nodes:
        raise QuadratureError(
            "the degree {} rule on the sphere of C^{} has {} nodes, above the "
            "limit of {}; lower the degree or raise max_quad_nodes"
            .format(degree, n, count, max_nodes))
    nodes, weights = _sphere_nodes(int(n), int(degree))
    log.debug("sphere rule n=%d degree=%d: %d nodes", n, degree, len(weights))
    return QuadratureRule('sphere', nodes, weights, {'n': n, 'degree': degree})


def sphere_moment(alpha, beta):
    """Exact integral of z^a zbar^b against the normalized sphere measure:
    zero unless a = b, else a! (n-1)! / (n-1+|a|)!."""
    if tuple(alpha) != tuple(beta):
        return Fraction(0)
    n = len(alpha)
    numerator = factorial(n - 1)
    for a in alpha:
        numerator *= factorial(a)
    return Fraction(numerator, factorial(n - 1 + sum(alpha)))


def uniform_sphere_samples(n, size, rng):
    """Uniform points on the unit sphere of C^n (normalized complex Gaussians)."""
    z = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    return z / np.linalg.norm(z, axis=1)[:, np.newaxis]


def monte_carlo_moment(alpha, beta, samples, rng, chunk=1_000_000):
    """Monte Carlo estimate of the sphere moment of z^a zbar^b."""
    n = len(alpha)
    total = 0j
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        z = uniform_sphere_samples(n, size, rng)
        total += np.sum(np.prod(z ** np.array(alpha) * np.conj(z) ** np.array(beta),
                                axis=1))
        done += size
    return total / samples


def monte_carlo_table(n, degree, samples, rng, max_order=2, chunk=250_000):
    """Rule values of the moments |z^a|^2, |a| <= max_order, next to their
    exact values and to Monte Carlo estimates from one stream of uniform
    samples, as a DataFrame."""
    rule = sphere_quadrature(n, degree)
    alphas = [alpha for p in range(min(max_order, degree // 2) + 1)
              for alpha in multi_indices(n, p)]
    exponents = 2 * np.array(alphas)
    totals = np.zeros(len(alphas))
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        z = uniform_sphere_samples(n, size, rng)
        totals += np.prod(np.abs(z[:, np.newaxis, :]) ** exponents,
                          axis=-1).sum(axis=0)
        done += size
    values = np.prod(np.abs(rule.nodes[:, np.newaxis, :]) ** exponents, axis=-1)
    records = []
    for j, alpha in enumerate(alphas):
        value = float(np.real(rule.integrate(values[:, j])))
        estimate = totals[j] / samples
        records.append({'alpha': alpha, 'value': value,
                        'exact': float(sphere_moment(alpha, alpha)),
                        'monte_carlo': estimate,
                        'error': abs(value - estimate)})
    return pd.DataFrame.from_records(records)


def validation_table(n, degree, compare_degree=None):
    """Rule value, exact value and error of every monomial moment with
    |a| + |b| <= degree, as a DataFrame."""
    rule = sphere_quadrature(n, degree)
    other = sphere_quadrature(n, compare_degree) if compare_degree else None
    records = []
    for total in range(degree + 1):
        for p in range(total + 1):
            for alpha in multi_indices(n, p):
                for beta in multi_indices(n, total - p):
                    values = np.prod(rule.nodes ** np.array(alpha)
                                     * np.conj(rule.nodes) ** np.array(beta),
                                     axis=1)
                    value = complex(rule.integrate(values))
                    exact = float(sphere_moment(alpha, beta))
                    record = {'alpha': alpha, 'beta': beta, 'value': value,
                              'exact': exact, 'error': abs(value - exact)}
                    if other is not None:
                        other_values = np.prod(
                            other.nodes ** np.array(alpha)
                            * np.conj(other.nodes) ** np.array(beta), axis=1)
                        record['degree_gap'] = abs(
                            value - complex(other.integrate(other_values)))
                    records.append(record)
    return pd.DataFrame.from_records(records)


# ---------------------------------------------------------------------------
# Real spheres and geodesic slices


@lru_cache(maxsize=32)
def _real_sphere_nodes(d, degree):
    if d == 1:
        return np.array([[-1.0], [1.0]]), np.array([0.5, 0.5])
    if d == 2:
        size = int(degree) + 1
        angles = 2 * np.pi * np.arange(size) / size
        return (np.column_stack([np.cos(angles), np.sin(angles)]),
                np.full(size, 1.0 / size))
    inner_nodes, inner_weights = _real_sphere_nodes(d - 1, degree)
    parameter = (d - 3) / 2
    t, w = roots_jacobi(degree // 2 + 1, parameter, parameter)
    w = w / w.sum()
    scale = np.sqrt(1 - t ** 2)
    inner = scale[:, np.newaxis, np.newaxis] * inner_nodes[np.newaxis, :, :]
    last = np.broadcast_to(t[:, np.newaxis, np.newaxis],
                           (len(t), len(inner_nodes), 1))
    nodes = np.concatenate([inner, last], axis=-1).reshape(-1, d)
    weights = (w[:, np.newaxis] * inner_weights[np.newaxis, :]).reshape(-1)
    return nodes, weights


def real_sphere_quadrature(d, degree):
    """Normalized measure on S^{d-1} in R^d, exact up to ``degree``."""
    if d < 1:
        raise QuadratureError("need d >= 1, got {}".format(d))
    _check_degree(degree)
    nodes, weights = _real_sphere_nodes(int(d), int(degree))
    return QuadratureRule('real_sphere', nodes, weights,
                          {'d': d, 'degree': degree})


def geodesic_quadrature(pole, t, degree):
    """Normalized measure on {v in S^{d-1} : <v, pole> = t}.

    :param pole: real unit vector of length d >= 2.
    """
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    if not abs(t) < 1:
        raise QuadratureError("geodesic spheres need |t| < 1, got t={}"
                              .format(t))
    d = len(pole)
    frame = null_space(pole[np.newaxis, :])
    inner = real_sphere_quadrature(d - 1, degree)
    nodes = t * pole[np.newaxis, :] \
        + np.sqrt(1 - t ** 2) * inner.nodes @ frame.T
    return QuadratureRule('geodesic', nodes, inner.weights,
                          {'d': d, 't': float(t), 'degree': degree,
                           'pole': pole.tolist()})


# ---------------------------------------------------------------------------
# C^n and the half line


@lru_cache(maxsize=16)
def _hermite_grid(n, points):
    x, w = roots_hermite(points)
    axes = np.meshgrid(*([x] * (2 * n)), indexing='ij')
    grid = np.stack([axis.reshape(-1) for axis in axes], axis=1)
    weight_axes = np.meshgrid(*([w] * (2 * n)), indexing='ij')
    weights = np.prod(np.stack([axis.reshape(-1) for axis in weight_axes],
                               axis=1), axis=1)
    return grid, weights


def complex_space_quadrature(n, points, center=None):
    """Tensor Gauss-Hermite rule with sum(weights * G(nodes)) approximating
    the integral of G(w) exp(-|w - center|^2 / 2) over C^n.

    Uses w = center + sqrt(2) x on each real axis; the Jacobian is 2^n."""
    if not 1 <= n <= 2:
        raise QuadratureError(
            "complex_space quadrature supports n in 1..2, got n={}".format(n))
    center = np.zeros(n, dtype=np.complex128) if center is None \
        else np.asarray(center, dtype=np.complex128)
    grid, weights = _hermite_grid(int(n), int(points))
    nodes = center[np.newaxis, :] + np.sqrt(2) * (grid[:, :n] + 1j * grid[:, n:])
    return QuadratureRule('complex_space', nodes, weights * 2.0 ** n,
                          {'n': n, 'hermite_degree': points})


def radial_laguerre_quadrature(order, points):
    """Gauss rule for the integral of g(u) u^order e^{-u} over [0, inf)."""
    if points < 1:
        raise QuadratureError("need at least one point")
    u, w = roots_genlaguerre(int(points), order)
    return QuadratureRule('radial_laguerre', u, w,
                          {'order': order, 'points': points})
