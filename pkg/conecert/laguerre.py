"""
Gaussian-weighted polynomials, Laguerre functions and the Weyl correspondence.

A :class:`GaussPoly` is z -> p(z, zbar) exp(-|z|^2 / 4) with an exact
polynomial part p. The Laguerre functions

    phi_k^nu(z) = L_k^nu(|z|^2 / 2) exp(-|z|^2 / 4)

are GaussPolys, and the operators

    At_j  = d/dz_j    + zbar_j / 4
    At_j* = d/dzbar_j - z_j / 4

act on them as d/dz_j and d/dzbar_j - z_j / 2 on the polynomial part.
"""
import logging
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.special import eval_genlaguerre
from sympy import QQ
from sympy import Rational
from sympy import binomial

from .exceptions import DimensionMismatchError
from .exceptions import NotHarmonicError
from .exceptions import QuadratureError
from .poly import ANTI
from .poly import HOLO
from .poly import BiPoly
from .poly import exact
from .quadrature import radial_laguerre_quadrature

log = logging.getLogger(__name__)


class GaussPoly():
    """p(z, zbar) * exp(-|z|^2 / 4)."""

    def __init__(self, poly):
        """
        :param poly: the exact polynomial part, a BiPoly (possibly
                     inhomogeneous).
        """
        self.poly = poly

    @property
    def n(self):
        return self.poly.n

    def __repr__(self):
        return 'GaussPoly({})'.format(self.poly)

    def __eq__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash(('gauss', self.poly))

    def __add__(self, other):
        return GaussPoly(self.poly + other.poly)

    def __sub__(self, other):
        return GaussPoly(self.poly - other.poly)

    def scale(self, factor):
        return GaussPoly(self.poly.scale(factor))

    def times(self, P):
        """Multiplies the polynomial part by the BiPoly P."""
        return GaussPoly(P * self.poly)

    def is_zero(self):
        return self.poly.is_zero()

    def diff(self, k, kind=HOLO):
        """Wirtinger derivative of the whole function."""
        n = self.n
        if kind == HOLO:
            factor = BiPoly.variable(n, k, conjugated=True)
        else:
            factor = BiPoly.variable(n, k)
        return GaussPoly(self.poly.diff(k, kind) - (factor * self.poly).scale(
            exact(QQ(1, 4))))

    def a_tilde(self, k):
        """At_k = d/dz_k + zbar_k / 4."""
        return GaussPoly(self.poly.diff(k, HOLO))

    def a_tilde_star(self, k):
        """At_k* = d/dzbar_k - z_k / 4."""
        half = exact(QQ(1, 2))
        return GaussPoly(self.poly.diff(k, ANTI)
                         - (BiPoly.variable(self.n, k) * self.poly).scale(half))

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        gaussian = np.exp(-np.sum(np.abs(z) ** 2, axis=-1) / 4)
        return self.poly.evaluate(z) * gaussian

    __call__ = evaluate


# ---------------------------------------------------------------------------
# Laguerre polynomials and functions


def laguerre_coefficients(k, nu):
    """Coefficients c_j of L_k^nu(x) = sum_j c_j x^j, via the three-term
    recurrence (j+1) L_{j+1} = (2j+1+nu-x) L_j - (j+nu) L_{j-1}."""
    if k < 0 or nu < 0:
        raise ValueError("need k >= 0 and nu >= 0, got k={}, nu={}"
                         .format(k, nu))
    previous = [QQ(1)]
    if k == 0:
        return previous
    current = [QQ(1 + nu), QQ(-1)]
    for j in range(1, k):
        shifted = [QQ.zero] + current
        padded = current + [QQ.zero]
        older = previous + [QQ.zero] * (len(padded) - len(previous))
        nxt = [((2 * j + 1 + nu) * padded[i] - shifted[i]
                - (j + nu) * older[i]) / (j + 1) for i in range(len(padded))]
        previous, current = current, nxt
    return current


def laguerre_poly(k, nu, n):
    """L_k^nu(|z|^2 / 2) as a BiPoly on C^n."""
    norm = BiPoly.norm_squared(n)
    total = BiPoly(n)
    power = BiPoly.constant(n)
    for j, c in enumerate(laguerre_coefficients(k, nu)):
        if j:
            power = power * norm
        if c:
            total = total + power.scale(exact(c / 2 ** j))
    return total


def laguerre_phi(k, nu, n=None):
    """phi_k^nu on C^n (n defaults to nu + 1)."""
    n = nu + 1 if n is None else n
    return GaussPoly(laguerre_poly(k, nu, n))


def laguerre_function(k, nu, radius):
    """phi_k^nu at |z| = radius, in floating point."""
    s = np.asarray(radius, dtype=float) ** 2
    return eval_genlaguerre(k, nu, s / 2) * np.exp(-s / 4)


def expansion_weight(n, k):
    """B_k^n = k! (n-1)! / (n+k-1)!, exact."""
    return Rational(1, binomial(n + k - 1, k))


# ---------------------------------------------------------------------------
# Weyl correspondence


def weyl_apply(P, g):
    """P(At) g = sum c_ab (At*)^a (At)^b g, with (At)^b applied first."""
    if P.n != g.n:
        raise DimensionMismatchError(P.n, g.n)
    result = GaussPoly(BiPoly(g.n))
    for (alpha, beta), coef in P.items():
        term = g
        for k, power in enumerate(beta, start=1):
            for _ in range(power):
                term = term.a_tilde(k)
        for k, power in enumerate(alpha, start=1):
            for _ in range(power):
                term = term.a_tilde_star(k)
        result = result + term.scale(coef)
    return result


@dataclass(frozen=True)
class WeylScalar:
    """weyl_apply(P, phi_k^{n-1}) = scalar * P * phi_{k-q}^{n+p+q-1}.

    ``scalar`` is None when the image is not such a multiple."""
    p: int
    q: int
    k: int
    scalar: object
    vanishes: bool

    @property
    def modulus_squared(self):
        if self.scalar is None:
            return None
        return self.scalar.x ** 2 + self.scalar.y ** 2


def weyl_scalar(P, k):
    """Applies P(At) to phi_k^{n-1} and extracts the proportionality constant
    against P * phi_{k-q}^{n+p+q-1}, exactly."""
    bidegree = P.require_bidegree()
    if bidegree is None or P.is_zero():
        raise ValueError("weyl_scalar needs a nonzero bihomogeneous P")
    if not P.laplacian().is_zero():
        raise NotHarmonicError("weyl_scalar needs a harmonic P")
    p, q = bidegree
    n = P.n
    image = weyl_apply(P, laguerre_phi(k, n - 1, n))
    if k < q:
        return WeylScalar(p, q, k, exact(0) if image.is_zero() else None,
                          image.is_zero())
    target = P * laguerre_poly(k - q, n + p + q - 1, n)
    key, value = target.items()[0]
    scalar = image.poly.coefficient(*key) / value
    if image.poly != target.scale(scalar):
        log.debug("no proportionality for P=%s, k=%d", P, k)
        return WeylScalar(p, q, k, None, image.is_zero())
    return WeylScalar(p, q, k, scalar, image.is_zero())


# ---------------------------------------------------------------------------
# Radial expansion


@dataclass(frozen=True)
class RadialExpansion:
    """Coefficients c_k = (2 pi)^{-n} B_k^n <f, phi_k^{n-1}>, with <,> the
    L^2(C^n) pairing; phi_j expands to the j-th unit vector."""
    n: int
    coefficients: np.ndarray
    weights: tuple
    tail_estimate: float
    normalization: str = '(2 pi)^-n B_k^n <f, phi_k^(n-1)>_L2(C^n)'

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, k):
        return self.coefficients[k]


def _radial_coefficients(f, k_max, n, points):
    rule = radial_laguerre_quadrature(n - 1, points)
    u = rule.nodes
    values = np.asarray(f(np.sqrt(2 * u)), dtype=np.complex128) * np.exp(u / 2)
    coefficients = []
    for k in range(k_max + 1):
        weight = float(expansion_weight(n, k)) / factorial(n - 1)
        coefficients.append(
            weight * rule.integrate(values * eval_genlaguerre(k, n - 1, u)))
    return np.array(coefficients, dtype=np.complex128)


def radial_expand(f, k_max, n, points=40, tol=1e-8):
    """Expands a radial f, given as a function of |z|, in the Laguerre
    functions phi_k^{n-1}.

    The Gauss-Laguerre sum is repeated with ``points + 8`` nodes; a larger
    discrepancy than ``tol`` raises QuadratureError."""
    coarse = _radial_coefficients(f, k_max, n, points)
    fine = _radial_coefficients(f, k_max, n, points + 8)
    tail = float(np.max(np.abs(fine - coarse))) if len(fine) else 0.0
    if tail > tol:
        raise QuadratureError(
            "radial expansion did not converge: tail estimate {:.3g} > {:.3g}"
            .format(tail, tol))
    return RadialExpansion(
        n=n, coefficients=fine, tail_estimate=tail,
        weights=tuple(expansion_weight(n, k) for k in range(k_max + 1)))


def radial_synthesis(coefficients, n):
    """The radial function sum_k c_k phi_k^{n-1}, as a function of |z|."""
    coefficients = np.asarray(coefficients, dtype=np.complex128)

    def synthesized(radius):
        return sum(c * laguerre_function(k, n - 1, radius)
                   for k, c in enumerate(coefficients))
    return synthesized
