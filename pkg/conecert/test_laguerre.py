import pytest
import numpy as np
from fractions import Fraction
from scipy.special import eval_genlaguerre
from sympy import QQ
from sympy import Rational
from sympy import assoc_laguerre
from sympy import symbols

from .exceptions import NotHarmonicError
from .exceptions import QuadratureError
from .harmonic import harmonic_basis
from .laguerre import GaussPoly
from .laguerre import expansion_weight
from .laguerre import laguerre_coefficients
from .laguerre import laguerre_function
from .laguerre import laguerre_phi
from .laguerre import laguerre_poly
from .laguerre import radial_expand
from .laguerre import radial_synthesis
from .laguerre import weyl_apply
from .laguerre import weyl_scalar
from .poly import HOLO
from .poly import BiPoly
from .poly import exact
from .poly import variables

(z1, z2), (zb1, zb2) = variables(2)

"""
Test Laguerre coefficients against sympy's assoc_laguerre.
"""
test_cases = (('k', 'nu'),
[
    (0, 0),
    (1, 1),
    (2, 1),
    (3, 2),
    (5, 0),
])

@pytest.mark.parametrize(*test_cases)
def test_laguerre_coefficients(k, nu):
    x = symbols('x')
    expected = assoc_laguerre(k, nu, x).expand().as_poly(x).all_coeffs()[::-1]
    found = laguerre_coefficients(k, nu)
    assert [QQ.to_sympy(c) for c in found] == expected


def test_laguerre_2_1():
    assert laguerre_coefficients(2, 1) == [QQ(3), QQ(-3), QQ(1, 2)]


def test_laguerre_poly_matches_scipy():
    rng = np.random.default_rng(2)
    z = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    s = np.sum(np.abs(z) ** 2, axis=1)
    for k in range(4):
        found = laguerre_poly(k, 1, 2).evaluate(z)
        assert np.allclose(found, eval_genlaguerre(k, 1, s / 2))
        phi = laguerre_phi(k, 1)
        assert np.allclose(phi(z), laguerre_function(k, 1, np.sqrt(s)))


"""
Test B_k^n = k! (n-1)! / (n+k-1)!.
"""
test_cases = (('n', 'k', 'expected'),
[
    (1, 3, Rational(1)),
    (2, 1, Rational(1, 2)),
    (2, 3, Rational(1, 4)),
    (3, 2, Rational(1, 6)),
])

@pytest.mark.parametrize(*test_cases)
def test_expansion_weight(n, k, expected):
    assert expansion_weight(n, k) == expected


def test_tilde_operators():
    g = laguerre_phi(2, 1)
    quarter = exact(Fraction(1, 4))
    assert g.a_tilde(1) == g.diff(1) + g.times(zb1.scale(quarter))
    assert g.a_tilde_star(2) == g.diff(2, 'anti') - g.times(z2.scale(quarter))


def test_gauss_poly_derivative_numerically():
    g = GaussPoly(z1 * zb2 + BiPoly.constant(2, 3))
    z = np.array([0.3 + 0.2j, -0.5 + 0.1j])
    h = 1e-6
    e = np.array([1, 0])
    dx = (g(z + h * e) - g(z - h * e)) / (2 * h)
    dy = (g(z + 1j * h * e) - g(z - 1j * h * e)) / (2 * h)
    assert g.diff(1, HOLO)(z) == pytest.approx((dx - 1j * dy) / 2, abs=1e-8)


"""
Test Weyl scalars computed by hand.
"""
test_cases = (('P', 'k', 'scalar'),
[
    (zb1, 1, exact(Fraction(-1, 2))),
    (z1, 1, exact(Fraction(-1, 2))),
    (zb1, 0, exact(0)),
])

@pytest.mark.parametrize(*test_cases)
def test_weyl_scalar(P, k, scalar):
    assert weyl_scalar(P, k).scalar == scalar


def test_weyl_scalar_modulus_over_basis():
    for p in range(3):
        for q in range(3):
            for P in harmonic_basis(2, p, q):
                for k in range(q, 4):
                    result = weyl_scalar(P, k)
                    assert result.modulus_squared == QQ(1, 4 ** (p + q))
                for k in range(q):
                    assert weyl_scalar(P, k).vanishes


def test_weyl_apply_order():
    g = laguerre_phi(1, 1)
    assert weyl_apply(z1 * zb1, g) == g.a_tilde(1).a_tilde_star(1)
    with pytest.raises(NotHarmonicError):
        weyl_scalar(z1 * zb1, 2)


"""
Test that phi_j expands to the j-th unit vector.
"""
test_cases = (('n', 'j'),
[
    (1, 0),
    (1, 4),
    (2, 2),
    (2, 6),
    (3, 3),
])

@pytest.mark.parametrize(*test_cases)
def test_radial_expand_delta(n, j):
    expansion = radial_expand(lambda r: laguerre_function(j, n - 1, r), 6, n)
    target = np.zeros(7)
    target[j] = 1
    assert np.allclose(expansion.coefficients, target, atol=1e-8)
    assert expansion.weights[j] == expansion_weight(n, j)


def test_radial_synthesis_round_trip():
    coefficients = np.array([0.5, -1.0 + 0.5j, 0.0, 2.0])
    expansion = radial_expand(radial_synthesis(coefficients, 2), 3, 2)
    assert np.allclose(expansion.coefficients, coefficients, atol=1e-8)


def test_radial_expand_reports_non_convergence():
    with pytest.raises(QuadratureError):
        radial_expand(lambda r: np.exp(-0.01 * r ** 2) * np.cos(8 * r), 4, 2,
                      points=6, tol=1e-12)
