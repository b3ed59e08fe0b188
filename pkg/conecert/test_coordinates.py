import pytest
import numpy as np

from .cone import cone_sample
from .coordinates import HopfCoordinate
from .coordinates import complex_to_real
from .coordinates import format_point
from .coordinates import hermitian_twist
from .coordinates import parse_point
from .coordinates import random_points
from .coordinates import real_to_complex
from .exceptions import DimensionMismatchError
from .exceptions import UsageError

"""
Test reading points written as re1,im1,...,ren,imn.
"""
test_cases = (('text', 'n', 'expected'),
[
    ('0.3,0.1,0.2,-0.4', 2, np.array([0.3 + 0.1j, 0.2 - 0.4j])),
    ('1,0', 1, np.array([1.0 + 0j])),
    (' -2.5, 1e-3 ,0,0,1,1', 3, np.array([-2.5 + 1e-3j, 0j, 1 + 1j])),
])

@pytest.mark.parametrize(*test_cases)
def test_parse_point(text, n, expected):
    z = parse_point(text, n)
    assert np.allclose(z, expected)
    assert np.allclose(parse_point(format_point(z), n), z)


"""
Test malformed points.
"""
test_cases = (('text', 'n'),
[
    ('0.3,0.1,0.2', 2),
    ('a,b', 1),
    ('', 1),
])

@pytest.mark.parametrize(*test_cases)
def test_parse_point_errors(text, n):
    with pytest.raises(UsageError):
        parse_point(text, n)


def test_real_complex_identification():
    z = np.array([[1 + 2j, 3 - 4j], [0.5j, -1.0]])
    assert np.allclose(complex_to_real(z), [[1, 2, 3, -4], [0, 0.5, -1, 0]])
    assert np.allclose(real_to_complex(complex_to_real(z)), z)
    with pytest.raises(ValueError):
        real_to_complex(np.ones(3))


def test_hermitian_twist():
    z = np.array([1j, 0])
    w = np.array([[1, 0], [0, 1], [1j, 0]])
    assert np.allclose(hermitian_twist(z, w), [1, 0, 0])


"""
Test Hopf coordinates of points on the unit sphere of C^2.
"""
test_cases = (('z', 'eta', 'xi1', 'xi2'),
[
    (np.array([1, 0]), 0, 0, 0),
    (np.array([0, 1j]), np.pi / 2, 0, np.pi / 2),
    (np.array([1, -1]), np.pi / 4, 0, np.pi),
])

@pytest.mark.parametrize(*test_cases)
def test_hopf_coordinate(z, eta, xi1, xi2):
    hopf = HopfCoordinate.create_from_complex(z)
    assert hopf.eta == pytest.approx(eta)
    assert hopf.xi1 == pytest.approx(xi1)
    assert hopf.xi2 == pytest.approx(xi2)
    assert np.allclose(hopf.to_complex(np.linalg.norm(z)), z)


def test_hopf_coordinate_errors():
    with pytest.raises(ValueError):
        HopfCoordinate.create_from_complex(np.zeros(2))
    with pytest.raises(DimensionMismatchError):
        HopfCoordinate.create_from_complex(np.ones(3))


"""
Test that cone base points satisfy sin(2 eta) = 2/|a| and
xi1 - xi2 = pi - arg a.
"""
test_cases = (('a', ),
[
    (3, ),
    (2, ),
    (2.5j, ),
    (-1 + 4j, ),
])

@pytest.mark.parametrize(*test_cases)
def test_cone_in_hopf_coordinates(a):
    for hopf in cone_sample(a, 2).hopf_coordinates():
        assert np.sin(2 * hopf.eta) == pytest.approx(2 / abs(a))
        phase = np.exp(1j * (hopf.xi1 - hopf.xi2))
        assert phase == pytest.approx(np.exp(1j * (np.pi - np.angle(a))))


def test_random_points():
    rng = np.random.default_rng(4)
    points = random_points(rng, 50, 3, max_norm=2.0)
    norms = np.linalg.norm(points, axis=1)
    assert points.shape == (50, 3)
    assert np.all((norms >= 0.2 - 1e-12) & (norms <= 2.0 + 1e-12))
