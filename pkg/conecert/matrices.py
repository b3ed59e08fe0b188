"""
Monomial bases of P_{p,q} and exact matrices of linear maps between them.

Matrices are sympy ``DomainMatrix`` objects over ``QQ_I`` kept in sparse
format. Rows index the codomain basis and columns the domain basis, so column
j is the coordinate vector of the operator applied to the j-th monomial.
"""
import logging
from functools import lru_cache
from math import comb

from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from .exceptions import BidegreeError
from .exceptions import DimensionMismatchError
from .exceptions import ResourceLimitError
from .poly import BiPoly
from .poly import format_complex
from .poly import multi_indices

log = logging.getLogger(__name__)


def space_dimension(n, p, q):
    """dim P_{p,q} = C(p+n-1, n-1) * C(q+n-1, n-1); zero for negative degrees."""
    if p < 0 or q < 0:
        return 0
    return comb(p + n - 1, n - 1) * comb(q + n - 1, n - 1)


class MonomialBasis():
    """Ordered monomial basis z^a zbar^b of P_{p,q}.

    Obtain instances through :func:`monomial_basis`, which caches them.
    """
    def __init__(self, n, p, q):
        self.n = n
        self.p = p
        self.q = q
        self.keys = tuple((alpha, beta)
                          for alpha in multi_indices(n, p)
                          for beta in multi_indices(n, q))
        self._index = {key: i for i, key in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def __repr__(self):
        return 'MonomialBasis(n={}, p={}, q={})'.format(self.n, self.p, self.q)

    @property
    def bidegree(self):
        return (self.p, self.q)

    def index(self, key):
        return self._index[key]

    def monomial(self, j):
        alpha, beta = self.keys[j]
        return BiPoly.monomial(alpha, beta)

    def coordinates(self, P):
        """Sparse coordinate vector {index: coefficient} of P in this basis."""
        if P.n != self.n:
            raise DimensionMismatchError(self.n, P.n)
        vector = {}
        for key, coef in P.terms.items():
            if key not in self._index:
                raise BidegreeError(
                    "term {} does not lie in P_{}".format(key, self.bidegree),
                    P.bidegrees())
            vector[self._index[key]] = coef
        return vector

    def polynomial(self, vector):
        """Inverse of :meth:`coordinates`; accepts a dict or a dense list."""
        if not isinstance(vector, dict):
            vector = dict(enumerate(vector))
        return BiPoly(self.n, {self.keys[j]: c for j, c in vector.items() if c})


@lru_cache(maxsize=None)
def monomial_basis(n, p, q):
    return MonomialBasis(n, p, q)


# ---------------------------------------------------------------------------
# Exact linear algebra helpers


def _sparse(matrix):
    return matrix.to_sparse()


def zeros(rows, cols):
    return DomainMatrix.zeros((rows, cols), QQ_I)


def identity(size):
    return _sparse(DomainMatrix.eye(size, QQ_I))


def exact_rank(matrix):
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    return matrix.rank()


def exact_kernel(matrix):
    """Basis of the right kernel as a list of sparse row dicts, in reduced row
    echelon form and ordered by pivot column."""
    rows, cols = matrix.shape
    if cols == 0:
        return []
    if rows == 0 or matrix.is_zero_matrix:
        return [{j: QQ_I.one} for j in range(cols)]
    reduced, pivots = matrix.rref()
    null = reduced.nullspace_from_rref(pivots)
    if null.shape[0] == 0:
        return []
    echelon, _ = null.rref()
    basis = []
    for i, row in sorted(echelon.to_dod().items()):
        row = {j: c for j, c in row.items() if c}
        if row:
            basis.append(row)
    return sorted(basis, key=min)


def check_budget(dim, limit, what='P_{p,q}'):
    if limit is not None and dim > limit:
        raise ResourceLimitError(
            "dim {} = {} exceeds the limit of {}".format(what, dim, limit))


def rows_as_strings(matrix):
    """Row-major nested lists of 'num/den+num/deni' strings."""
    rows, cols = matrix.shape
    dod = matrix.to_dod()
    zero = format_complex(QQ_I.zero)
    return [[format_complex(dod[i][j]) if j in dod.get(i, {}) else zero
             for j in range(cols)] for i in range(rows)]


class OperatorMatrix():
    """Exact matrix of a linear map between two monomial bases."""

    def __init__(self, domain, codomain, entries, name=''):
        """
        :param domain: MonomialBasis of the source space.
        :param codomain: MonomialBasis of the target space.
        :param entries: DomainMatrix over QQ_I of shape (len(codomain),
                        len(domain)).
        :param name: label used in reports.
        """
        if entries.shape != (len(codomain), len(domain)):
            raise DimensionMismatchError(
                (len(codomain), len(domain)), entries.shape, what='matrix shape')
        self.domain = domain
        self.codomain = codomain
        self.entries = _sparse(entries)
        self.name = name

    @classmethod
    def from_operator(cls, operator, domain, codomain, name=''):
        """Assembles the matrix column by column from a BiPoly -> BiPoly map."""
        dod = {}
        for j in range(len(domain)):
            image = operator(domain.monomial(j))
            for i, coef in codomain.coordinates(image).items():
                dod.setdefault(i, {})[j] = coef
        entries = DomainMatrix.from_dod(dod, (len(codomain), len(domain)), QQ_I)
        log.debug("assembled %s: %s -> %s (%dx%d)", name or 'operator',
                  domain.bidegree, codomain.bidegree, len(codomain), len(domain))
        return cls(domain, codomain, entries, name)

    @classmethod
    def identity(cls, basis, name='I'):
        return cls(basis, basis, identity(len(basis)), name)

    def __repr__(self):
        return 'OperatorMatrix({}, {} -> {}, shape={})'.format(
            self.name, self.domain.bidegree, self.codomain.bidegree, self.shape)

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return (self.domain.keys == other.domain.keys
                and self.codomain.keys == other.codomain.keys
                and self.entries.to_dod() == other.entries.to_dod())

    @property
    def shape(self):
        return self.entries.shape

    def is_zero(self):
        return not any(row for row in self.entries.to_dod().values())

    def is_square(self):
        return self.domain.keys == self.codomain.keys

    def rank(self):
        return exact_rank(self.entries)

    def kernel(self):
        """Kernel basis as BiPoly values, rows of a reduced echelon form."""
        return [self.domain.polynomial(row) for row in exact_kernel(self.entries)]

    def kernel_dimension(self):
        return len(self.domain) - self.rank()

    def is_invertible(self):
        return self.is_square() and self.rank() == len(self.domain)

    def apply(self, P):
        vector = self.domain.coordinates(P)
        image = {}
        for i, row in self.entries.to_dod().items():
            total = QQ_I.zero
            for j, c in row.items():
                if j in vector:
                    total += c * vector[j]
            if total:
                image[i] = total
        return self.codomain.polynomial(image)

    def compose(self, other):
        """self o other: apply ``other`` first."""
        if other.codomain.keys != self.domain.keys:
            raise DimensionMismatchError(other.codomain.bidegree,
                                         self.domain.bidegree,
                                         what='composition bidegree')
        return OperatorMatrix(other.domain, self.codomain,
                              self.entries.matmul(other.entries),
                              '{}*{}'.format(self.name, other.name))

    def __add__(self, other):
        if (self.domain.keys, self.codomain.keys) != (other.domain.keys,
                                                      other.codomain.keys):
            raise DimensionMismatchError(self.shape, other.shape,
                                         what='operator bases')
        return OperatorMatrix(self.domain, self.codomain,
                              self.entries + other.entries,
                              '{}+{}'.format(self.name, other.name))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, factor):
        factor = QQ_I.convert(factor)
        return OperatorMatrix(self.domain, self.codomain,
                              self.entries * factor, self.name)

    def power(self, k):
        if not self.is_square():
            raise BidegreeError("only endomorphisms have powers")
        result = OperatorMatrix.identity(self.domain)
        for _ in range(k):
            result = self.compose(result)
        result.name = '{}^{}'.format(self.name, k)
        return result

    def nilpotency_index(self, limit=None):
        """Smallest k with self^k == 0, or None if none up to ``limit``
        (default: the dimension, which bounds any nilpotency index)."""
        if not self.is_square():
            raise BidegreeError("only endomorphisms can be nilpotent")
        limit = len(self.domain) if limit is None else limit
        current = OperatorMatrix.identity(self.domain)
        for k in range(1, limit + 1):
            current = self.compose(current)
            if current.is_zero():
                return k
        return None

    def to_rows(self):
        return rows_as_strings(self.entries)

    def to_dict(self):
        return {'name': self.name,
                'n': self.domain.n,
                'domain': list(self.domain.bidegree),
                'codomain': list(self.codomain.bidegree),
                'shape': list(self.shape),
                'rows': self.to_rows()}
