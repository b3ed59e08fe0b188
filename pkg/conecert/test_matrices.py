import pytest
from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from .exceptions import BidegreeError
from .exceptions import DimensionMismatchError
from .exceptions import ResourceLimitError
from .matrices import OperatorMatrix
from .matrices import check_budget
from .matrices import exact_kernel
from .matrices import exact_rank
from .matrices import monomial_basis
from .matrices import space_dimension
from .poly import variables

(z1, z2), (zb1, zb2) = variables(2)

"""
Test dim P_{p,q} = C(p+n-1, n-1) C(q+n-1, n-1).
"""
test_cases = (('n', 'p', 'q', 'expected'),
[
    (2, 1, 1, 4),
    (2, 2, 1, 6),
    (3, 2, 1, 18),
    (3, 3, 3, 100),
    (2, -1, 0, 0),
])

@pytest.mark.parametrize(*test_cases)
def test_space_dimension(n, p, q, expected):
    assert space_dimension(n, p, q) == expected
    assert len(monomial_basis(n, p, q)) == expected


def test_basis_order_and_coordinates():
    basis = monomial_basis(2, 1, 1)
    assert [basis.monomial(j) for j in range(4)] == \
        [z1 * zb1, z1 * zb2, z2 * zb1, z2 * zb2]
    P = (z1 * zb2).scale(3) - z2 * zb2
    coordinates = basis.coordinates(P)
    assert coordinates == {1: QQ_I(3, 0), 3: QQ_I(-1, 0)}
    assert basis.polynomial(coordinates) == P


def test_coordinates_reject_other_bidegrees():
    with pytest.raises(BidegreeError):
        monomial_basis(2, 1, 1).coordinates(z1)


def test_laplacian_matrix_rows():
    matrix = OperatorMatrix.from_operator(
        lambda P: P.laplacian(), monomial_basis(2, 1, 1),
        monomial_basis(2, 0, 0), name='laplacian')
    assert matrix.shape == (1, 4)
    assert matrix.to_rows() == [['4/1+0/1i', '0/1+0/1i', '0/1+0/1i',
                                 '4/1+0/1i']]
    assert matrix.rank() == 1
    assert matrix.kernel_dimension() == 3


def test_nilpotent_operator():
    basis = monomial_basis(2, 1, 0)
    A = OperatorMatrix.from_operator(lambda P: zb2 * P.diff(1, 'anti')
                                     + z1 * P.diff(2, 'holo'), basis, basis,
                                     name='A')
    assert A.to_rows() == [['0/1+0/1i', '1/1+0/1i'],
                           ['0/1+0/1i', '0/1+0/1i']]
    assert A.kernel() == [z1]
    assert A.nilpotency_index() == 2
    assert A.power(2).is_zero()
    assert A.apply(z2) == z1
    assert not A.is_invertible()
    shifted = A + OperatorMatrix.identity(basis).scale(3)
    assert shifted.is_invertible()
    assert (shifted - A) == OperatorMatrix.identity(basis).scale(3)


def test_compose_checks_bases():
    A = OperatorMatrix.identity(monomial_basis(2, 1, 0))
    B = OperatorMatrix.identity(monomial_basis(2, 0, 1))
    with pytest.raises(DimensionMismatchError):
        A.compose(B)


def test_exact_kernel_edge_shapes():
    assert exact_kernel(DomainMatrix.zeros((0, 3), QQ_I)) == \
        [{0: QQ_I.one}, {1: QQ_I.one}, {2: QQ_I.one}]
    assert exact_kernel(DomainMatrix.zeros((2, 0), QQ_I)) == []
    assert exact_rank(DomainMatrix.zeros((0, 0), QQ_I)) == 0


def test_kernel_is_reduced_echelon():
    dod = {0: {0: QQ_I(1, 0), 1: QQ_I(1, 0), 2: QQ_I(1, 0)}}
    kernel = exact_kernel(DomainMatrix.from_dod(dod, (1, 3), QQ_I))
    assert kernel == [{0: QQ_I(1, 0), 2: QQ_I(-1, 0)},
                      {1: QQ_I(1, 0), 2: QQ_I(-1, 0)}]


def test_budget():
    check_budget(10, 10)
    check_budget(10, None)
    with pytest.raises(ResourceLimitError):
        check_budget(11, 10)
