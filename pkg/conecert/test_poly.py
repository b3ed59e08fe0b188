import pytest
import numpy as np
from fractions import Fraction
from sympy import QQ_I

from .exceptions import BidegreeError
from .exceptions import DimensionMismatchError
from .exceptions import IndexRangeError
from .poly import ANTI
from .poly import HOLO
from .poly import BiPoly
from .poly import exact
from .poly import format_complex
from .poly import multi_indices
from .poly import parse_complex
from .poly import to_exact
from .poly import to_complex
from .poly import variables
from .poly import arithmetic
from .poly import differentiate
from .poly import evaluate
from .poly import grade_info
from .poly import laplacian

(z1, z2), (zb1, zb2) = variables(2)
norm2 = BiPoly.norm_squared(2)
norm3 = BiPoly.norm_squared(3)

"""
Test the exact reading of complex literals, decimals included.
"""
test_cases = (('text', 'expected'),
[
    ('3', exact(3)),
    ('-5/2', exact(Fraction(-5, 2))),
    ('i', exact(0, 1)),
    ('-i', exact(0, -1)),
    ('1+i', exact(1, 1)),
    ('0.5-0.25i', exact(Fraction(1, 2), Fraction(-1, 4))),
    ('0.1', exact(Fraction(1, 10))),
    ('3/1+0/1i', exact(3)),
])

@pytest.mark.parametrize(*test_cases)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


def test_format_complex_round_trip():
    value = exact(Fraction(-3, 4), Fraction(2, 6))
    assert format_complex(value) == '-3/4+1/3i'
    assert parse_complex(format_complex(value)) == value


def test_complex_floats_rejected():
    with pytest.raises(TypeError):
        to_exact(1 + 2j)


"""
Test the descending lexicographic order of multi-indices.
"""
test_cases = (('n', 'degree', 'expected'),
[
    (2, 1, [(1, 0), (0, 1)]),
    (2, 2, [(2, 0), (1, 1), (0, 2)]),
    (3, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
    (2, 0, [(0, 0)]),
    (2, -1, []),
])

@pytest.mark.parametrize(*test_cases)
def test_multi_indices(n, degree, expected):
    assert multi_indices(n, degree) == expected


"""
Test Laplacians against hand computed values: Delta |z|^2 = 4n and
Delta |z|^4 = 8 (n + 1) |z|^2.
"""
test_cases = (('P', 'expected'),
[
    (norm2, BiPoly.constant(2, 8)),
    (norm3, BiPoly.constant(3, 12)),
    (norm2 ** 2, norm2.scale(24)),
    (z1 * zb2, BiPoly(2)),
    (z1 * zb1 - z2 * zb2, BiPoly(2)),
    (z1 * z1 * zb1, z1.scale(8)),
])

@pytest.mark.parametrize(*test_cases)
def test_laplacian(P, expected):
    assert P.laplacian() == expected


"""
Test Wirtinger derivatives of monomials.
"""
test_cases = (('P', 'k', 'kind', 'expected'),
[
    (z1 * z1 * zb2, 1, HOLO, (z1 * zb2).scale(2)),
    (z1 * z1 * zb2, 2, ANTI, z1 * z1),
    (z1 * z1 * zb2, 2, HOLO, BiPoly(2)),
    (norm2, 2, ANTI, z2),
])

@pytest.mark.parametrize(*test_cases)
def test_diff(P, k, kind, expected):
    assert P.diff(k, kind) == expected


def test_diff_index_out_of_range():
    with pytest.raises(IndexRangeError):
        z1.diff(3)


def test_arithmetic_is_exact():
    half = exact(Fraction(1, 2))
    P = (z1 + zb2).scale(half) - z1.scale(half)
    assert P == zb2.scale(half)
    assert (z1 + z2) * (z1 - z2) == z1 * z1 - z2 * z2
    assert (z1 * zb2).conj() == zb1 * z2
    assert (z1 * 2).coefficient((1, 0), (0, 0)) == QQ_I(2, 0)


def test_mixed_dimensions_rejected():
    with pytest.raises(DimensionMismatchError):
        z1 + norm3


"""
Test bidegree detection.
"""
test_cases = (('P', 'bidegree'),
[
    (z1 * zb2, (1, 1)),
    (z1 * z2 * zb1, (2, 1)),
    (BiPoly.constant(2), (0, 0)),
    (BiPoly(2), None),
])

@pytest.mark.parametrize(*test_cases)
def test_bidegree(P, bidegree):
    assert P.require_bidegree() == bidegree


def test_inhomogeneous_rejected():
    with pytest.raises(BidegreeError):
        (z1 + norm2).require_bidegree()
    with pytest.raises(BidegreeError):
        z1.require_bidegree((0, 1))


def test_grade_info_and_euler():
    P = z1 * z1 * zb2
    info = P.grade_info()
    assert info.bidegree == (2, 1)
    assert info.phase_exponent == 1
    assert info.phase_factor(np.pi) == pytest.approx(-1)
    holo, anti = P.euler_degrees()
    assert holo == P.scale(2)
    assert anti == P


def test_evaluate_matches_formula():
    P = (z1 * zb2).scale(exact(3, 1)) + norm2
    rng = np.random.default_rng(7)
    z = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    expected = (3 + 1j) * z[:, 0] * np.conj(z[:, 1]) \
        + np.sum(np.abs(z) ** 2, axis=1)
    assert np.allclose(P.evaluate(z), expected)
    assert P(z[0]) == pytest.approx(expected[0])


def test_random_is_bihomogeneous_and_seeded():
    first = BiPoly.random(3, 2, 1, np.random.default_rng(11))
    second = BiPoly.random(3, 2, 1, np.random.default_rng(11))
    assert first == second
    assert first.require_bidegree() == (2, 1)
    assert not first.is_zero()


def _random_pair(rng):
    n = int(rng.integers(1, 4))
    P = BiPoly.random(n, int(rng.integers(0, 4)), int(rng.integers(0, 4)), rng)
    Q = BiPoly.random(n, int(rng.integers(0, 4)), int(rng.integers(0, 4)), rng)
    return P, Q


def _size_bound(P, radius=2.0):
    """Upper bound for |P| on the ball of the given radius."""
    return sum(abs(to_complex(c)) * radius ** (sum(a) + sum(b))
               for (a, b), c in P.items())


def _ball_points(n, count, rng, radius=2.0):
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z * radius * rng.random((count, 1))


def test_laplacian_of_product():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        P, Q = _random_pair(rng)
        cross = BiPoly(P.n)
        for k in range(1, P.n + 1):
            cross = cross + P.diff(k, HOLO) * Q.diff(k, ANTI) \
                + P.diff(k, ANTI) * Q.diff(k, HOLO)
        expected = P.laplacian() * Q + P * Q.laplacian() + cross.scale(4)
        assert (P * Q).laplacian() == expected


def test_mixed_partials_commute():
    rng = np.random.default_rng(31)
    for n, p, q in [(2, 3, 2), (3, 2, 2), (3, 3, 3)]:
        P = BiPoly.random(n, p, q, rng)
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                assert differentiate(differentiate(P, j, HOLO), k, ANTI) == \
                    differentiate(differentiate(P, k, ANTI), j, HOLO)
                assert differentiate(differentiate(P, j, HOLO), k, HOLO) == \
                    differentiate(differentiate(P, k, HOLO), j, HOLO)


def test_evaluate_is_ring_homomorphism():
    rng = np.random.default_rng(8)
    for _ in range(50):
        P, Q = _random_pair(rng)
        z = _ball_points(P.n, 4, rng)
        tol = 1e-12 * max(1.0, _size_bound(P) * _size_bound(Q))
        assert np.max(np.abs(evaluate(P * Q, z)
                             - evaluate(P, z) * evaluate(Q, z))) <= tol
        tol = 1e-12 * max(1.0, _size_bound(P) + _size_bound(Q))
        assert np.max(np.abs(evaluate(P + Q, z)
                             - (evaluate(P, z) + evaluate(Q, z)))) <= tol


"""
Rotating every coordinate by one phase multiplies P by e^{i (p-q) t}.
"""
test_cases = (('n', 'p', 'q'),
[
    (1, 3, 0),
    (2, 2, 1),
    (2, 1, 3),
    (3, 2, 2),
    (3, 0, 2),
])

@pytest.mark.parametrize(*test_cases)
def test_phase_identity(n, p, q):
    rng = np.random.default_rng(100 * n + 10 * p + q)
    P = BiPoly.random(n, p, q, rng)
    info = grade_info(P)
    assert info.phase_exponent == p - q
    z = _ball_points(n, 1, rng)[0]
    tol = 1e-12 * max(1.0, _size_bound(P))
    for theta in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        rotated = evaluate(P, np.exp(1j * theta) * z)
        assert abs(rotated - info.phase_factor(theta) * evaluate(P, z)) <= tol


"""
The module-level entry points agree with the BiPoly methods.
"""
test_cases = (('op', 'rhs', 'factor', 'expected'),
[
    ('add', zb2, None, z1 * zb2 + zb2),
    ('sub', z1 * zb2, None, BiPoly(2)),
    ('mul', z2, None, z1 * z2 * zb2),
    ('scale', None, exact(0, 2), (z1 * zb2).scale(exact(0, 2))),
    ('conj', None, None, zb1 * z2),
])

@pytest.mark.parametrize(*test_cases)
def test_arithmetic_dispatch(op, rhs, factor, expected):
    assert arithmetic(z1 * zb2, rhs, op=op, factor=factor) == expected


def test_arithmetic_unknown_operation():
    with pytest.raises(ValueError):
        arithmetic(z1, z2, op='div')


test_cases = (('P', 'k', 'kind', 'expected'),
[
    (z1 * z1 * zb2, 1, HOLO, z1.scale(2) * zb2),
    (z1 * z1 * zb2, 2, ANTI, z1 * z1),
    (z1 * z1 * zb2, 2, HOLO, BiPoly(2)),
])

@pytest.mark.parametrize(*test_cases)
def test_module_differentiate(P, k, kind, expected):
    assert differentiate(P, k, kind) == expected
    assert laplacian(P) == P.laplacian()
    z = np.array([0.5 + 0.25j, -1 + 0.75j])
    assert evaluate(P, z) == P(z)
