"""
Bigraded harmonic polynomials: the Fischer pairing, bases of H_{p,q} as exact
Laplacian kernels, Fischer decompositions and the phase splitting of a
degree-k spherical harmonic into its bigraded parts.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, Tuple

import numpy as np
from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from .exceptions import AliasingError
from .exceptions import BidegreeError
from .exceptions import DimensionMismatchError
from .matrices import OperatorMatrix
from .matrices import exact_rank
from .matrices import monomial_basis
from .poly import BiPoly
from .poly import conjugate
from .polyio import poly_to_dict

log = logging.getLogger(__name__)


def _factorial_weight(alpha, beta):
    weight = 1
    for e in alpha + beta:
        weight *= factorial(e)
    return weight


def fischer_inner(R, S):
    """<z^a zbar^b, z^c zbar^d> = a! b! when (a,b) = (c,d), else 0.

    Linear in R, conjugate-linear in S."""
    if R.n != S.n:
        raise DimensionMismatchError(R.n, S.n)
    left = R.require_bidegree()
    right = S.require_bidegree()
    if left is not None and right is not None and left != right:
        raise BidegreeError(
            "Fischer pairing needs equal bidegrees, got {} and {}"
            .format(left, right), (left, right))
    total = QQ_I.zero
    s_terms = S.terms
    for key, coef in R.terms.items():
        if key in s_terms:
            total += coef * conjugate(s_terms[key]) * _factorial_weight(*key)
    return total


def gram_matrix(polys):
    """Fischer Gram matrix G[i][j] = <polys[i], polys[j]> as nested lists."""
    return [[fischer_inner(R, S) for S in polys] for R in polys]


def laplacian_matrix(n, p, q):
    """Matrix of Delta: P_{p,q} -> P_{p-1,q-1}."""
    return OperatorMatrix.from_operator(
        lambda P: P.laplacian(),
        monomial_basis(n, p, q), monomial_basis(n, p - 1, q - 1),
        name='laplacian')


@dataclass(frozen=True)
class HarmonicBasis:
    laplacian_matrix: OperatorMatrix
    basis: Tuple[BiPoly, ...]

    @property
    def dim(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


@lru_cache(maxsize=None)
def harmonic_basis(n, p, q):
    """Basis of H_{p,q}, the kernel of Delta inside P_{p,q}, in reduced
    echelon form over the monomial basis."""
    if n < 1 or p < 0 or q < 0:
        raise ValueError("need n >= 1 and p, q >= 0; got n={}, p={}, q={}"
                         .format(n, p, q))
    matrix = laplacian_matrix(n, p, q)
    basis = tuple(matrix.kernel())
    log.debug("dim H_(%d,%d) for n=%d is %d", p, q, n, len(basis))
    return HarmonicBasis(laplacian_matrix=matrix, basis=basis)


@dataclass(frozen=True)
class HarmonicDecomposition:
    """P = sum_j |z|^{2j} P_j with every P_j harmonic of bidegree (p-j, q-j)."""
    bidegree: Tuple[int, int]
    components: Tuple[BiPoly, ...]

    def recompose(self):
        return recompose(self)

    def to_dict(self):
        return {'bidegree': list(self.bidegree),
                'components': [poly_to_dict(P) for P in self.components]}


def _decomposition_columns(n, p, q):
    """Candidate columns |z|^{2j} h for h in the basis of H_{p-j,q-j}.
    Returns the list of (j, h) labels and the images in P_{p,q}."""
    norm = BiPoly.norm_squared(n)
    labels, images = [], []
    for j in range(min(p, q) + 1):
        lift = norm ** j
        for h in harmonic_basis(n, p - j, q - j).basis:
            labels.append((j, h))
            images.append(lift * h)
    return labels, images


def _decomposition_matrix(basis, images):
    dod = {}
    for col, image in enumerate(images):
        for i, coef in basis.coordinates(image).items():
            dod.setdefault(i, {})[col] = coef
    return DomainMatrix.from_dod(dod, (len(basis), len(images)), QQ_I)


@lru_cache(maxsize=None)
def _fischer_system(n, p, q):
    """Labels, the decomposition matrix and its exact inverse."""
    basis = monomial_basis(n, p, q)
    labels, images = _decomposition_columns(n, p, q)
    matrix = _decomposition_matrix(basis, images)
    if matrix.shape[0] != matrix.shape[1] or exact_rank(matrix) != len(images):
        raise ArithmeticError(
            "Fischer system for P_{} (n={}) is not uniquely solvable"
            .format((p, q), n))
    return basis, tuple(labels), matrix, matrix.inv().to_dod()


def _apply_inverse(inverse, vector):
    solution = {}
    for i, row in inverse.items():
        total = QQ_I.zero
        for j, coef in row.items():
            if j in vector:
                total += coef * vector[j]
        if total:
            solution[i] = total
    return solution


def _lu_solution(matrix, vector):
    """Solves the same system by LU elimination on the right-hand side."""
    rhs = DomainMatrix.from_dod({i: {0: value} for i, value in vector.items()},
                                (matrix.shape[0], 1), QQ_I)
    solved = matrix.lu_solve(rhs).to_dod()
    return {i: row[0] for i, row in solved.items() if row.get(0)}


def fischer_decompose(P, bidegree=None):
    """Unique Fischer decomposition of a bihomogeneous P.

    :param bidegree: required when P is the zero polynomial.
    """
    found = P.require_bidegree(bidegree)
    if found is None:
        raise BidegreeError("the zero polynomial needs an explicit bidegree")
    p, q = found
    n = P.n
    basis, labels, matrix, inverse = _fischer_system(n, p, q)
    vector = basis.coordinates(P)
    solution = _apply_inverse(inverse, vector)
    if solution != _lu_solution(matrix, vector):
        raise ArithmeticError(
            "Fischer decomposition of P_{} (n={}) differs between the inverse "
            "and an LU solve".format((p, q), n))
    components = [BiPoly(n) for _ in range(min(p, q) + 1)]
    for idx, value in solution.items():
        j, h = labels[idx]
        components[j] = components[j] + h.scale(value)
    return HarmonicDecomposition(bidegree=(p, q), components=tuple(components))


def recompose(decomposition):
    """sum_j |z|^{2j} P_j."""
    components = decomposition.components
    n = components[0].n
    norm = BiPoly.norm_squared(n)
    total = BiPoly(n)
    for j, component in enumerate(components):
        total = total + (norm ** j) * component
    return total


def laplacian_identity_residual(R, j):
    """Delta(|z|^{2j} R) - 4j(n+p+q-j-1) |z|^{2j-2} R for harmonic R, where
    (p, q) is the bidegree of |z|^{2j} R."""
    r_p, r_q = R.require_bidegree()
    n = R.n
    p, q = r_p + j, r_q + j
    norm = BiPoly.norm_squared(n)
    lhs = ((norm ** j) * R).laplacian()
    rhs = ((norm ** (j - 1)) * R).scale(4 * j * (n + p + q - j - 1))
    return lhs - rhs


# ---------------------------------------------------------------------------
# Phase splitting


def orbit_angles(size):
    return 2 * np.pi * np.arange(size) / size


def orbit_samples(func, omega, size):
    """Values of func at e^{i theta} omega on a uniform grid of ``size``
    angles in [0, 2 pi)."""
    omega = np.asarray(omega, dtype=np.complex128)
    points = np.exp(1j * orbit_angles(size))[:, np.newaxis] * omega
    return np.asarray(func(points), dtype=np.complex128)


def check_aliasing(k, size):
    """The frequencies p-q in {-k, -k+2, ..., k} must be distinct mod size."""
    freqs = [p - (k - p) for p in range(k + 1)]
    residues = {f % size for f in freqs} if size > 0 else set()
    if size < k + 1 or len(residues) != len(freqs):
        raise AliasingError(
            "a grid of {} angles cannot separate the {} phase frequencies of "
            "degree {}; use an odd grid of at least {} angles".format(
                size, k + 1, k, k + 1 if k % 2 == 0 else k + 2))


def bigrade_split(samples, k):
    """Splits a degree-k spherical harmonic sampled on a phase orbit.

    :param samples: values Y(e^{i theta_m} omega), theta_m = 2 pi m / M.
    :param k: total degree.
    :returns: {(p, q): Y_{p,q}(omega)} for p + q = k.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    size = samples.shape[0]
    check_aliasing(k, size)
    spectrum = np.fft.fft(samples) / size
    split: Dict[Tuple[int, int], complex] = {}
    for p in range(k, -1, -1):
        q = k - p
        split[(p, q)] = complex(spectrum[(p - q) % size])
    return split
