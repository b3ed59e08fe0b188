"""
Exact polynomials in z and z-bar on C^n.

A :class:`BiPoly` stores P(z) = sum c_ab z^a zbar^b as a sparse map from pairs
of multi-indices to Gaussian rationals (elements of sympy's ``QQ_I``). Every
operation is exact; floating point only appears in :meth:`BiPoly.evaluate`.
:class:`ExtendedPoly` carries the same polynomials over a field containing
QQ_I, such as QQ(e^{i pi / N}).
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from sympy import CC, I, QQ, QQ_I
from sympy import exp
from sympy import pi

from .exceptions import BidegreeError
from .exceptions import DimensionMismatchError
from .exceptions import IndexRangeError

log = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]
ExactComplex = type(QQ_I.one)

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)

HOLO = 'holo'
ANTI = 'anti'


# ---------------------------------------------------------------------------
# Gaussian rationals


def _rational(value):
    """Returns value as an element of QQ. Strings are read digit by digit, so
    '0.1' is exactly 1/10."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    elif isinstance(value, float):
        value = Fraction(repr(value))
    if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        return QQ(int(value.numerator), int(value.denominator))
    return QQ.convert(value)


def exact(re=0, im=0):
    """Builds an ExactComplex from ints, Fractions, strings or QQ elements."""
    return QQ_I(_rational(re), _rational(im))


def to_exact(value):
    """Coerces a coefficient to ExactComplex. Python complex floats are
    rejected: the exact core never sees binary floats silently."""
    if isinstance(value, ExactComplex):
        return value
    if isinstance(value, complex):
        raise TypeError(
            "complex floats are not exact coefficients; use exact(re, im)")
    if isinstance(value, str):
        return parse_complex(value)
    return exact(value)


def parse_complex(text):
    """Parses 'a+bi' forms: '3', '-5/2', 'i', '-i', '1+i', '0.5-0.25i',
    '3/1+0/1i'. Parts are rationals or decimals."""
    body = text.replace(' ', '')
    if not body:
        raise ValueError("empty complex literal")
    if not body.endswith('i'):
        return exact(Fraction(body))
    body = body[:-1]
    cut = max(body.rfind('+'), body.rfind('-'))
    while cut > 0 and body[cut - 1] in 'eE':
        cut = max(body.rfind('+', 0, cut), body.rfind('-', 0, cut))
    if cut > 0:
        real, imag = body[:cut], body[cut:]
    else:
        real, imag = '0', body
    if imag in ('', '+'):
        imag = '1'
    elif imag == '-':
        imag = '-1'
    return exact(Fraction(real), Fraction(imag))


def rational_string(q):
    return '{}/{}'.format(int(q.numerator), int(q.denominator))


def format_complex(c):
    """Inverse of :func:`parse_complex`, e.g. '3/1+0/1i'."""
    sign = '-' if c.y < 0 else '+'
    return '{}{}{}i'.format(rational_string(c.x), sign, rational_string(abs(c.y)))


def conjugate(c):
    return QQ_I(c.x, -c.y)


def to_complex(c):
    """Nearest complex float: int/int division is correctly rounded."""
    return complex(int(c.x.numerator) / int(c.x.denominator),
                   int(c.y.numerator) / int(c.y.denominator))


def abs_squared(c):
    return c.x * c.x + c.y * c.y


# ---------------------------------------------------------------------------
# Multi-indices


def multi_indices(n, degree):
    """All multi-indices of length n and given degree, in descending
    lexicographic order: (1,0) before (0,1)."""
    if degree < 0:
        return []
    found = [alpha for alpha in itertools.product(range(degree + 1), repeat=n)
             if sum(alpha) == degree]
    return sorted(found, reverse=True)


def unit_index(n, k):
    return tuple(1 if j == k else 0 for j in range(n))


def _add_index(a, b):
    return tuple(x + y for x, y in zip(a, b))


def term_key(key):
    """Canonical order: ascending (|a|, |b|), then a and b descending lex."""
    alpha, beta = key
    return (sum(alpha), sum(beta),
            tuple(-x for x in alpha), tuple(-x for x in beta))


@dataclass(frozen=True)
class GradeInfo:
    """Grading data of a polynomial.

    :attr bidegree: (p, q) when the polynomial is bihomogeneous, else None.
    :attr components: every bidegree present, in ascending order.
    :attr phase_exponent: p - q when all terms share |a| - |b|; then
                          P(e^{it} z) = e^{i (p-q) t} P(z) coefficientwise.
    """
    bidegree: Optional[Tuple[int, int]]
    components: Tuple[Tuple[int, int], ...]
    phase_exponent: Optional[int]

    def phase_factor(self, theta):
        if self.phase_exponent is None:
            return None
        return np.exp(1j * self.phase_exponent * theta)


class BiPoly():
    """An exact polynomial in z_1..z_n and their conjugates."""

    def __init__(self, n, terms=None):
        """
        :param n: ambient complex dimension (n >= 1).
        :param terms: mapping (alpha, beta) -> coefficient. Coefficients are
                      coerced with :func:`to_exact`; zeros are dropped.
        """
        if int(n) < 1:
            raise ValueError("ambient dimension must be at least 1, got {}"
                             .format(n))
        self.n = int(n)
        clean = {}
        for (alpha, beta), coef in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            beta = tuple(int(b) for b in beta)
            if len(alpha) != self.n or len(beta) != self.n:
                raise DimensionMismatchError(
                    self.n, max(len(alpha), len(beta)),
                    what='multi-index length')
            if min(alpha + beta, default=0) < 0:
                raise ValueError("negative exponent in {}".format((alpha, beta)))
            coef = to_exact(coef)
            if coef:
                clean[(alpha, beta)] = clean.get((alpha, beta), ZERO) + coef
        self._terms = {key: value for key, value in clean.items() if value}
        self._arrays = None

    # construction helpers

    @classmethod
    def constant(cls, n, value=1):
        zero = (0,) * n
        return cls(n, {(zero, zero): value})

    @classmethod
    def variable(cls, n, k, conjugated=False):
        """z_k (or zbar_k when conjugated), k counted from 1."""
        _check_index(n, k)
        zero = (0,) * n
        unit = unit_index(n, k - 1)
        key = (zero, unit) if conjugated else (unit, zero)
        return cls(n, {key: ONE})

    @classmethod
    def monomial(cls, alpha, beta, coef=1):
        return cls(len(alpha), {(tuple(alpha), tuple(beta)): coef})

    @classmethod
    def norm_squared(cls, n):
        """|z|^2 = sum z_k zbar_k."""
        return cls(n, {(unit_index(n, k), unit_index(n, k)): ONE
                       for k in range(n)})

    @classmethod
    def random(cls, n, p, q, rng, max_coef=5, density=0.7):
        """A random element of P_{p,q} with small Gaussian-integer
        coefficients; never zero."""
        keys = [(a, b) for a in multi_indices(n, p) for b in multi_indices(n, q)]
        terms = {}
        for key in keys:
            if rng.random() < density:
                terms[key] = QQ_I(int(rng.integers(-max_coef, max_coef + 1)),
                                  int(rng.integers(-max_coef, max_coef + 1)))
        poly = cls(n, terms)
        if poly.is_zero():
            poly = cls(n, {keys[int(rng.integers(len(keys)))]: ONE})
        return poly

    # basic protocol

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda item: term_key(item[0]))

    def coefficient(self, alpha, beta):
        return self._terms.get((tuple(alpha), tuple(beta)), ZERO)

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self):
        return 'BiPoly(n={}, {})'.format(self.n, self)

    def __str__(self):
        if not self._terms:
            return '0'
        pieces = []
        for (alpha, beta), coef in self.items():
            text = '({})'.format(QQ_I.to_sympy(coef))
            pieces.append('*'.join([text] + _monomial_factors(alpha, beta)))
        return ' + '.join(pieces)

    # arithmetic

    def _check_same_n(self, other):
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n)

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            self._check_same_n(other)
            return other
        return BiPoly.constant(self.n, to_exact(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for key, coef in other._terms.items():
            terms[key] = terms.get(key, ZERO) + coef
        return BiPoly(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.n, {key: -coef for key, coef in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(to_exact(other))
        self._check_same_n(other)
        terms = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (_add_index(a1, a2), _add_index(b1, b2))
                terms[key] = terms.get(key, ZERO) + c1 * c2
        return BiPoly(self.n, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if int(exponent) < 0:
            raise ValueError("negative powers are not polynomials")
        result = BiPoly.constant(self.n)
        for _ in range(int(exponent)):
            result = result * self
        return result

    def scale(self, factor):
        factor = to_exact(factor)
        return BiPoly(self.n, {key: coef * factor
                               for key, coef in self._terms.items()})

    def conj(self):
        """Function conjugation: swaps a and b and conjugates coefficients."""
        return BiPoly(self.n, {(beta, alpha): conjugate(coef)
                               for (alpha, beta), coef in self._terms.items()})

    # calculus

    def diff(self, k, kind=HOLO):
        """Wirtinger derivative d/dz_k (holo) or d/dzbar_k (anti), k from 1."""
        _check_index(self.n, k)
        if kind not in (HOLO, ANTI):
            raise ValueError("kind must be '{}' or '{}'".format(HOLO, ANTI))
        j = k - 1
        terms = {}
        for (alpha, beta), coef in self._terms.items():
            exps = alpha if kind == HOLO else beta
            if exps[j] == 0:
                continue
            lowered = tuple(e - 1 if i == j else e for i, e in enumerate(exps))
            key = (lowered, beta) if kind == HOLO else (alpha, lowered)
            terms[key] = terms.get(key, ZERO) + coef * exps[j]
        return BiPoly(self.n, terms)

    def laplacian(self):
        """Delta P = 4 sum_k d^2 P / dz_k dzbar_k."""
        result = BiPoly(self.n)
        for k in range(1, self.n + 1):
            result = result + self.diff(k, ANTI).diff(k, HOLO)
        return result.scale(4)

    # grading

    def bidegrees(self):
        return tuple(sorted({(sum(a), sum(b)) for a, b in self._terms}))

    @property
    def bidegree(self):
        found = self.bidegrees()
        return found[0] if len(found) == 1 else None

    def is_bihomogeneous(self):
        return len(self.bidegrees()) <= 1

    def require_bidegree(self, expected=None):
        """Returns the bidegree, raising BidegreeError when the polynomial is
        inhomogeneous or differs from ``expected``. The zero polynomial has
        every bidegree."""
        found = self.bidegrees()
        if len(found) > 1:
            raise BidegreeError(
                "polynomial is not bihomogeneous; bidegrees present: {}"
                .format(list(found)), found)
        if expected is not None:
            expected = tuple(expected)
            if found and found[0] != expected:
                raise BidegreeError(
                    "expected bidegree {}, found {}".format(expected, found[0]),
                    found)
            return expected
        return found[0] if found else None

    def grade_info(self):
        found = self.bidegrees()
        shifts = {p - q for p, q in found}
        return GradeInfo(bidegree=found[0] if len(found) == 1 else None,
                         components=found,
                         phase_exponent=shifts.pop() if len(shifts) == 1 else None)

    def euler_degrees(self):
        """Returns (sum z_k dP/dz_k, sum zbar_k dP/dzbar_k); for P in P_{p,q}
        these equal p*P and q*P."""
        self.require_bidegree()
        holo = BiPoly(self.n)
        anti = BiPoly(self.n)
        for k in range(1, self.n + 1):
            holo = holo + BiPoly.variable(self.n, k) * self.diff(k, HOLO)
            anti = anti + BiPoly.variable(self.n, k, True) * self.diff(k, ANTI)
        return holo, anti

    # numerics

    def _exponent_arrays(self):
        if self._arrays is None:
            items = self.items()
            alphas = np.array([a for (a, _), _ in items], dtype=np.int64).reshape(-1, self.n)
            betas = np.array([b for (_, b), _ in items], dtype=np.int64).reshape(-1, self.n)
            coefs = np.array([to_complex(c) for _, c in items], dtype=np.complex128)
            self._arrays = (alphas, betas, coefs)
        return self._arrays

    def evaluate(self, z):
        """Evaluates at one point (shape (n,)) or many (shape (..., n)).

        Returns a complex float, or an array of shape (...)."""
        return _evaluate_arrays(self.n, self._exponent_arrays(), z)

    __call__ = evaluate


def _check_index(n, k):
    if not 1 <= int(k) <= n:
        raise IndexRangeError(
            "variable index {} out of range 1..{}".format(k, n))


def _monomial_factors(alpha, beta):
    factors = []
    for k, a in enumerate(alpha):
        if a:
            factors.append('z{}'.format(k + 1) + ('^{}'.format(a) if a > 1 else ''))
    for k, b in enumerate(beta):
        if b:
            factors.append('zb{}'.format(k + 1) + ('^{}'.format(b) if b > 1 else ''))
    return factors


def _evaluate_arrays(n, arrays, z):
    z = np.asarray(z, dtype=np.complex128)
    if z.shape[-1:] != (n,):
        raise DimensionMismatchError(n, z.shape[-1] if z.ndim else 0,
                                     what='point dimension')
    alphas, betas, coefs = arrays
    if len(coefs) == 0:
        out = np.zeros(z.shape[:-1], dtype=np.complex128)
        return complex(out) if out.ndim == 0 else out
    zz = z[..., np.newaxis, :]
    monomials = np.prod(zz ** alphas * np.conj(zz) ** betas, axis=-1)
    out = monomials @ coefs
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Coefficient fields beyond QQ_I


@dataclass(frozen=True)
class CoefficientField:
    """A sympy domain that contains QQ_I.

    :attr domain: QQ(zeta) with zeta = e^{i pi / order}, or CC.
    :attr i: the image of the imaginary unit in ``domain``.
    :attr generator: float value of the generator zeta; None for CC.
    """
    domain: object
    i: object
    generator: Optional[complex] = None

    @property
    def zeta(self):
        return self.domain.unit

    def embed(self, c):
        """QQ_I -> domain."""
        c = to_exact(c)
        return (self.domain.convert_from(c.x, QQ)
                + self.domain.convert_from(c.y, QQ) * self.i)

    def to_complex(self, coef):
        if self.generator is None:
            return complex(coef)
        digits = [float(a) for a in coef.to_list()] or [0.0]
        return complex(np.polyval(digits, self.generator))


@lru_cache(maxsize=None)
def root_of_unity_field(order):
    """QQ(zeta) for zeta = e^{i pi / order}. The order must be even, so that
    i = zeta^(order / 2) lies in the field."""
    if order < 2 or order % 2:
        raise ValueError("the order must be even and positive, got {}"
                         .format(order))
    domain = QQ.algebraic_field(exp(I * pi / order))
    return CoefficientField(domain, domain.unit ** (order // 2),
                            complex(domain.ext.root))


FLOAT_FIELD = CoefficientField(CC, CC.from_sympy(I))


class ExtendedPoly():
    """A polynomial in z and zbar with coefficients in a
    :class:`CoefficientField`.

    Linear operators are lifted through their exact action on monomials, so
    derivatives and the Laplacian are those of :class:`BiPoly`.
    """

    def __init__(self, n, field, terms=None):
        self.n = int(n)
        self.field = field
        zero = field.domain.zero
        clean = {}
        for key, coef in (terms or {}).items():
            clean[key] = clean.get(key, zero) + coef
        self._terms = {key: coef for key, coef in clean.items() if coef}
        self._arrays = None

    @classmethod
    def lift(cls, P, field):
        return cls(P.n, field, {key: field.embed(coef)
                                for key, coef in P.terms.items()})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda item: term_key(item[0]))

    def coefficient(self, alpha, beta):
        return self._terms.get((tuple(alpha), tuple(beta)),
                               self.field.domain.zero)

    def complex_terms(self):
        return {key: self.field.to_complex(coef)
                for key, coef in self._terms.items()}

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            other = ExtendedPoly.lift(other, self.field)
        if not isinstance(other, ExtendedPoly):
            return NotImplemented
        return (self.n == other.n and self.field == other.field
                and self._terms == other._terms)

    def __repr__(self):
        if not self._terms:
            return 'ExtendedPoly(n={}, 0)'.format(self.n)
        pieces = ['*'.join(['({})'.format(self.field.domain.to_sympy(coef))]
                           + _monomial_factors(alpha, beta))
                  for (alpha, beta), coef in self.items()]
        return 'ExtendedPoly(n={}, {})'.format(self.n, ' + '.join(pieces))

    def _check_same(self, other):
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n)
        if self.field != other.field:
            raise ValueError("polynomials over different coefficient fields")

    def __add__(self, other):
        if isinstance(other, BiPoly):
            other = ExtendedPoly.lift(other, self.field)
        self._check_same(other)
        terms = dict(self._terms)
        for key, coef in other._terms.items():
            terms[key] = terms.get(key, self.field.domain.zero) + coef
        return ExtendedPoly(self.n, self.field, terms)

    __radd__ = __add__

    def __neg__(self):
        return ExtendedPoly(self.n, self.field,
                            {key: -coef for key, coef in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, BiPoly):
            other = ExtendedPoly.lift(other, self.field)
        return self + (-other)

    def scale(self, factor):
        """Multiplies by an element of the field's domain."""
        return ExtendedPoly(self.n, self.field,
                            {key: coef * factor
                             for key, coef in self._terms.items()})

    def apply(self, operator):
        """Lifts a linear map BiPoly -> BiPoly to this coefficient field."""
        terms = {}
        zero = self.field.domain.zero
        for (alpha, beta), coef in self._terms.items():
            image = operator(BiPoly.monomial(alpha, beta))
            for key, c in image.terms.items():
                terms[key] = terms.get(key, zero) + coef * self.field.embed(c)
        return ExtendedPoly(self.n, self.field, terms)

    def diff(self, k, kind=HOLO):
        return self.apply(lambda monomial: monomial.diff(k, kind))

    def laplacian(self):
        return self.apply(BiPoly.laplacian)

    def evaluate(self, z):
        if self._arrays is None:
            items = self.items()
            alphas = np.array([a for (a, _), _ in items], dtype=np.int64).reshape(-1, self.n)
            betas = np.array([b for (_, b), _ in items], dtype=np.int64).reshape(-1, self.n)
            coefs = np.array([self.field.to_complex(c) for _, c in items],
                             dtype=np.complex128)
            self._arrays = (alphas, betas, coefs)
        return _evaluate_arrays(self.n, self._arrays, z)

    __call__ = evaluate


# ---------------------------------------------------------------------------
# Operation-level entry points


def arithmetic(lhs, rhs=None, op='add', factor=None):
    """Dispatches add, sub, mul, scale and conj on BiPoly operands."""
    if op == 'add':
        return lhs + rhs
    if op == 'sub':
        return lhs - rhs
    if op == 'mul':
        return lhs * rhs
    if op == 'scale':
        return lhs.scale(factor)
    if op == 'conj':
        return lhs.conj()
    raise ValueError("unknown arithmetic operation '{}'".format(op))


def differentiate(P, k, kind=HOLO):
    return P.diff(k, kind)


def laplacian(P):
    return P.laplacian()


def evaluate(P, z):
    return P.evaluate(z)


def grade_info(P):
    return P.grade_info()


def euler_degrees(P):
    return P.euler_degrees()


def variables(n):
    """Returns (z, zbar): tuples of the coordinate polynomials."""
    return (tuple(BiPoly.variable(n, k) for k in range(1, n + 1)),
            tuple(BiPoly.variable(n, k, True) for k in range(1, n + 1)))
