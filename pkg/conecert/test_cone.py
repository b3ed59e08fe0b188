import pytest
import numpy as np
from fractions import Fraction
from sympy import QQ

from .cone import Certificate
from .cone import KernelCell
from .cone import apply_AB
from .cone import certify_nonharmonic
from .cone import cone_polynomial
from .cone import cone_sample
from .cone import cone_vanishing_profile
from .cone import divisible_harmonics_dimension
from .cone import eigen_residual
from .cone import gram_asymmetry
from .cone import irreducibility_rank
from .cone import nilpotency
from .cone import operator_identities
from .cone import operator_matrix
from .cone import sigma_matrix
from .cone import sigma_rotate
from .cone import sigma_rotate_numeric
from .config import Config
from .exceptions import DegenerateConeError
from .exceptions import NotHarmonicError
from .harmonic import harmonic_basis
from .poly import BiPoly
from .poly import ExtendedPoly
from .poly import exact
from .poly import root_of_unity_field
from .poly import variables

(z1, z2), (zb1, zb2) = variables(2)
norm2 = BiPoly.norm_squared(2)


def test_cone_polynomial():
    assert cone_polynomial(3, 2) == (z1 * zb2).scale(3) + norm2
    assert cone_polynomial(3, 2, s=2) == cone_polynomial(3, 2) ** 2


"""
Test the action of A = zbar2 d/dzbar1 + z1 d/dz2 and B = d^2/dzbar1 dz2.
"""
test_cases = (('P', 'which', 'expected'),
[
    (z2, 'A', z1),
    (z1, 'A', BiPoly(2)),
    (zb1, 'A', zb2),
    (z2 * zb1, 'A', z1 * zb1 + z2 * zb2),
    (z2 * zb1, 'B', BiPoly.constant(2)),
    (z1 * zb2, 'B', BiPoly(2)),
])

@pytest.mark.parametrize(*test_cases)
def test_apply_AB(P, which, expected):
    assert apply_AB(P, which) == expected


def test_operator_matrix_of_A():
    A = operator_matrix(2, 1, 0, 'A')
    assert A.to_rows() == [['0/1+0/1i', '1/1+0/1i'],
                           ['0/1+0/1i', '0/1+0/1i']]
    with pytest.raises(DegenerateConeError):
        operator_matrix(2, 1, 0, 'mult_H', a=0)
    with pytest.raises(ValueError):
        operator_matrix(2, 1, 0, 'C')


"""
Test that Q -> Delta(HQ) has trivial kernel at desk scale.
"""
test_cases = (('a', 'n'),
[
    (3, 2),
    (2, 2),
    (exact(0, 1), 2),
    (exact(1, 1), 2),
    (exact(Fraction(-5, 2)), 2),
    (3, 3),
])

@pytest.mark.parametrize(*test_cases)
def test_certificate(a, n):
    certificate = certify_nonharmonic(a, n, 2, 2)
    assert certificate.verdict == 'non-harmonic-up-to-degree(3,3)'
    assert certificate.exit_code == 0
    assert certificate.irreducible_rank == n
    assert all(cell.dim == 0 and cell.eigen_shift_invertible
               for cell in certificate.cells)
    table = certificate.kernel_table()
    assert list(table['dim']) == [0] * 9


def test_power_certificate():
    certificate = certify_nonharmonic(3, 2, 1, 1, s=2)
    assert certificate.verdict == 'non-harmonic-up-to-degree(3,3)'
    report = certificate.to_dict()
    assert all(entry['staged_dim'] == 0 for entry in report['kernels'])
    assert report['gram_asymmetry'] == '1/1'


def test_certificate_with_threads_matches():
    single = certify_nonharmonic(3, 2, 2, 1)
    threaded = certify_nonharmonic(3, 2, 2, 1, config=Config(threads=3))
    assert single.cells == threaded.cells


"""
Test partial certificates when the matrix budget is exceeded.
"""
test_cases = (('limit', 'verdict'),
[
    (3, 'partial-nothing-tested'),
    (6, 'partial-non-harmonic-up-to-degree(1,1)'),
])

@pytest.mark.parametrize(*test_cases)
def test_partial_certificate(limit, verdict):
    certificate = certify_nonharmonic(3, 2, 1, 1,
                                      config=Config(max_matrix_dim=limit))
    assert not certificate.complete
    assert certificate.verdict == verdict
    assert certificate.exit_code == 3


def test_counterexample_verdict():
    cell = KernelCell(0, 0, 1, 1, None, 1, True, BiPoly.constant(2))
    certificate = Certificate(a=exact(3), n=2, s=1, range=(0, 0),
                              tested_range=(0, 0), cells=(cell,),
                              irreducible_rank=2, gram_asymmetry=QQ(1))
    assert certificate.verdict == 'counterexample-found'
    assert certificate.exit_code == 2
    assert certificate.to_dict()['counterexample']['terms'][0]['alpha'] \
        == [0, 0]


def test_degenerate_cone():
    with pytest.raises(DegenerateConeError):
        certify_nonharmonic(0, 2, 1, 1)


"""
Test the structure identities over full harmonic bases.
"""
test_cases = (('n', 'p', 'q'),
[
    (2, 1, 1),
    (2, 2, 1),
    (2, 2, 2),
    (3, 1, 2),
])

@pytest.mark.parametrize(*test_cases)
def test_structure_identities(n, p, q):
    for Q in harmonic_basis(n, p, q):
        first, second = operator_identities(Q)
        assert first.is_zero() and second.is_zero()
        for a in (3, exact(0, 1), exact(Fraction(-5, 2))):
            assert eigen_residual(Q, a).is_zero()


def test_operator_identities_hold_off_harmonics():
    rng = np.random.default_rng(5)
    Q0 = BiPoly.random(2, 2, 2, rng)
    first, second = operator_identities(Q0)
    assert first.is_zero() and second.is_zero()


def test_eigen_residual_needs_harmonic():
    with pytest.raises(NotHarmonicError):
        eigen_residual(norm2, 3)


"""
Test that A is nilpotent of index at most p+q+1.
"""
test_cases = (('n', 'p', 'q', 'expected'),
[
    (2, 1, 0, 2),
    (2, 0, 1, 2),
    (2, 0, 0, 1),
])

@pytest.mark.parametrize(*test_cases)
def test_nilpotency(n, p, q, expected):
    assert nilpotency(n, p, q) == expected


def test_nilpotency_bound():
    for n in (2, 3):
        for p in range(3):
            for q in range(3):
                assert nilpotency(n, p, q) <= p + q + 1


def test_gram_asymmetry_and_rank():
    assert gram_asymmetry(2, 1, 0) == QQ(1)
    assert irreducibility_rank(3, 2) == 2
    assert divisible_harmonics_dimension(3, 2, 0, 0) == 0
    assert divisible_harmonics_dimension(3, 2, 1, 1) == 0


"""
Test the rotation sigma = diag(e^{i theta/2}, e^{-i theta/2}) at exact angles.
"""
test_cases = (('P', 'turns', 'expected'),
[
    (z1, 1, z1.scale(exact(0, 1))),
    (z2, 1, z2.scale(exact(0, -1))),
    (z1 * zb1, Fraction(1, 3), z1 * zb1),
    (z1 * zb2, 1, (z1 * zb2).scale(-1)),
    (z1 * zb2, 2, z1 * zb2),
])

@pytest.mark.parametrize(*test_cases)
def test_sigma_rotate(P, turns, expected):
    assert sigma_rotate(P, turns) == expected


def test_sigma_rotate_float_angle():
    rotated = sigma_rotate_numeric(z1 * zb2, 1.0)
    z = np.array([0.3 + 0.4j, -0.2 + 0.1j])
    assert rotated(z) == pytest.approx(np.exp(1j) * z[0] * np.conj(z[1]))
    assert rotated.complex_terms()[((1, 0), (0, 1))] == \
        pytest.approx(np.exp(1j))
    exact_rotation = sigma_rotate(z1 * zb2, 1)
    assert sigma_rotate_numeric(z1 * zb2, np.pi)(z) == \
        pytest.approx(exact_rotation(z))


"""
Test exact rotations whose phases leave QQ_I: the coefficient of each
monomial is multiplied by zeta^power, zeta = e^{i pi / (2 v)} for turns = u/v.
"""
test_cases = (('P', 'turns', 'power'),
[
    (z1, Fraction(1, 2), 1),
    (z2, Fraction(1, 3), 11),
    (z1 * zb2, Fraction(1, 3), 2),
    (zb1 * z2, Fraction(2, 5), 16),
    (z1 * z1 * zb2 + z1 * z1 * z1, Fraction(1, 4), 3),
])

@pytest.mark.parametrize(*test_cases)
def test_sigma_rotate_extended_field(P, turns, power):
    order = 2 * turns.denominator
    field = root_of_unity_field(order)
    rotated = sigma_rotate(P, turns)
    assert rotated.field == field
    assert field.generator == pytest.approx(np.exp(1j * np.pi / order))
    assert rotated == ExtendedPoly.lift(P, field).scale(field.zeta ** power)
    rng = np.random.default_rng(order)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    sigma = sigma_matrix(2, float(turns) * np.pi)
    assert rotated(z) == pytest.approx(P(sigma @ z))


def test_sigma_rotate_cone():
    field = root_of_unity_field(6)
    rotated = sigma_rotate(cone_polynomial(3, 2), Fraction(1, 3))
    assert rotated == ExtendedPoly.lift((z1 * zb2).scale(3), field) \
        .scale(field.zeta ** 2) + norm2
    assert sigma_rotate(norm2, Fraction(2, 7)) == norm2


"""
Test that rotation commutes with the Laplacian on random polynomials.
"""
test_cases = (('p', 'q', 'turns'),
[
    (1, 1, Fraction(1, 2)),
    (2, 1, Fraction(1, 3)),
    (2, 2, Fraction(2, 5)),
    (3, 1, Fraction(-3, 4)),
])

@pytest.mark.parametrize(*test_cases)
def test_sigma_rotate_commutes_with_laplacian(p, q, turns):
    rng = np.random.default_rng(10 * p + q)
    z = np.array([0.4 - 0.3j, -0.7 + 0.2j])
    theta = float(turns) * np.pi
    for _ in range(5):
        P = BiPoly.random(2, p, q, rng)
        assert sigma_rotate(P, turns).laplacian() == \
            sigma_rotate(P.laplacian(), turns)
        assert sigma_rotate_numeric(P, theta).laplacian()(z) == \
            pytest.approx(sigma_rotate_numeric(P.laplacian(), theta)(z))


"""
Test cone samples: slopes t = -rho a/|a| with rho^2 - |a| rho + 1 = 0.
"""
test_cases = (('a', 'slopes'),
[
    (3, [(-3 - np.sqrt(5)) / 2, (-3 + np.sqrt(5)) / 2]),
    (2, [-1.0]),
    (-3, [(3 - np.sqrt(5)) / 2, (3 + np.sqrt(5)) / 2]),
])

@pytest.mark.parametrize(*test_cases)
def test_cone_sample(a, slopes):
    sample = cone_sample(a, 2, count=8)
    assert sorted(np.real(sample.slopes)) == pytest.approx(sorted(slopes))
    assert np.max(sample.residuals()) < 1e-12
    assert len(sample.points) == len(slopes) + 8


def test_cone_sample_in_c3_and_imaginary_a():
    sample = cone_sample(exact(0, 3), 3, count=4)
    assert np.max(sample.residuals()) < 1e-12
    assert np.all(sample.points[:, 2] == 0)


def test_empty_cone_sample():
    sample = cone_sample(1, 2)
    assert sample.empty
    assert '|a|' in sample.reason
    with pytest.raises(DegenerateConeError):
        cone_vanishing_profile(1, 1, 1)


"""
Test the dimension of the harmonics vanishing on both complex lines of the
cone in C^2.
"""
test_cases = (('p', 'q', 'annihilator'),
[
    (1, 0, 0),
    (1, 1, 1),
])

@pytest.mark.parametrize(*test_cases)
def test_cone_vanishing_profile(p, q, annihilator):
    profile = cone_vanishing_profile(3, p, q)
    assert profile.annihilator_dim == annihilator
    assert profile.harmonic_dim == len(profile.max_moduli)


@pytest.mark.parametrize('p', [0, 1, 2])
@pytest.mark.parametrize('q', [0, 1, 2])
def test_harmonic_basis_nonzero_on_cone(p, q):
    profile = cone_vanishing_profile(3, p, q)
    assert profile.harmonic_dim == len(harmonic_basis(2, p, q).basis)
    assert min(profile.max_moduli) > 1e-6
    points = cone_sample(3, 2).points
    for P in harmonic_basis(2, p, q).basis:
        assert np.max(np.abs(P.evaluate(points))) > 1e-6


def test_divisible_harmonics_match_certificate():
    certificate = certify_nonharmonic(3, 2, 2, 2)
    for cell in certificate.cells:
        assert divisible_harmonics_dimension(3, 2, cell.p, cell.q) == cell.dim
        assert cell.dim == 0
