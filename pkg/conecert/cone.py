"""
The cone H(z) = a z1 zbar2 + |z|^2 and exact certificates that it lies in no
zero set of a bigraded harmonic polynomial.

The certifier works degree by degree: for every Q in P_{p,q} it decides
exactly whether Delta(H^s Q) = 0 forces Q = 0. Supporting operators:

    A = zbar2 d/dzbar1 + z1 d/dz2      (keeps the bidegree, nilpotent)
    B = d^2 / dzbar1 dz2               (lowers the bidegree by (1,1))
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import null_space
from sympy import CC
from sympy import QQ
from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from .config import Config
from .coordinates import HopfCoordinate
from .exceptions import DegenerateConeError
from .exceptions import NotHarmonicError
from .exceptions import ResourceLimitError
from .harmonic import fischer_inner
from .harmonic import harmonic_basis
from .matrices import OperatorMatrix
from .matrices import check_budget
from .matrices import exact_rank
from .matrices import monomial_basis
from .matrices import space_dimension
from .poly import ANTI
from .poly import FLOAT_FIELD
from .poly import HOLO
from .poly import BiPoly
from .poly import ExtendedPoly
from .poly import abs_squared
from .poly import format_complex
from .poly import rational_string
from .poly import root_of_unity_field
from .poly import to_complex
from .poly import to_exact
from .polyio import poly_to_dict
from .utils import WorkerMap
from .utils import progress

log = logging.getLogger(__name__)

OPERATORS = ('A', 'B', 'laplacian', 'mult_H', 'delta_mult_H', 'eigen_shift')


def _require_plane(n):
    if n < 2:
        raise ValueError("the operators A and B need n >= 2, got n={}"
                         .format(n))


def _cone_coefficient(a):
    a = to_exact(a)
    if not a:
        raise DegenerateConeError(
            "a = 0 degenerates H to |z|^2, whose zero set is {0}")
    return a


def cone_polynomial(a, n, s=1):
    """H^s with H = a z1 zbar2 + |z|^2."""
    _require_plane(n)
    a = to_exact(a)
    H = (BiPoly.variable(n, 1) * BiPoly.variable(n, 2, True)).scale(a) \
        + BiPoly.norm_squared(n)
    return H ** s


def apply_AB(P, which):
    """Applies A (which='A') or B (which='B') to P."""
    _require_plane(P.n)
    if which == 'A':
        zbar2 = BiPoly.variable(P.n, 2, True)
        z1 = BiPoly.variable(P.n, 1)
        return zbar2 * P.diff(1, ANTI) + z1 * P.diff(2, HOLO)
    if which == 'B':
        return P.diff(1, ANTI).diff(2, HOLO)
    raise ValueError("which must be 'A' or 'B', got '{}'".format(which))


def operator_matrix(n, p, q, op, a=None, s=1):
    """Exact matrix of ``op`` on P_{p,q} over the monomial bases.

    :param op: one of 'A', 'B', 'laplacian', 'mult_H', 'delta_mult_H',
               'eigen_shift'.
    :param a: cone coefficient, required by the last three operators.
    :param s: power of H for mult_H and delta_mult_H.
    """
    _require_plane(n)
    domain = monomial_basis(n, p, q)
    if op == 'A':
        return OperatorMatrix.from_operator(
            lambda P: apply_AB(P, 'A'), domain, domain, name='A')
    if op == 'B':
        return OperatorMatrix.from_operator(
            lambda P: apply_AB(P, 'B'), domain, monomial_basis(n, p - 1, q - 1),
            name='B')
    if op == 'laplacian':
        return OperatorMatrix.from_operator(
            lambda P: P.laplacian(), domain, monomial_basis(n, p - 1, q - 1),
            name='laplacian')
    if op not in OPERATORS:
        raise ValueError("unknown operator '{}'; expected one of {}"
                         .format(op, ', '.join(OPERATORS)))
    a = _cone_coefficient(a)
    if op == 'eigen_shift':
        shift = operator_matrix(n, p, q, 'A').scale(a) \
            + OperatorMatrix.identity(domain).scale(n + p + q)
        shift.name = 'eigen_shift'
        return shift
    if s < 1:
        raise ValueError("the power s must be at least 1, got {}".format(s))
    H = cone_polynomial(a, n, s)
    if op == 'mult_H':
        return OperatorMatrix.from_operator(
            lambda Q: H * Q, domain, monomial_basis(n, p + s, q + s),
            name='mult_H')
    return OperatorMatrix.from_operator(
        lambda Q: (H * Q).laplacian(), domain,
        monomial_basis(n, p + s - 1, q + s - 1), name='delta_mult_H')


# ---------------------------------------------------------------------------
# Structure checks


def eigen_residual(Q, a):
    """Delta(HQ) - 4(a A Q + (n+p+q) Q) for harmonic Q; identically zero."""
    p, q = Q.require_bidegree() or (0, 0)
    if not Q.laplacian().is_zero():
        raise NotHarmonicError("eigen_residual needs a harmonic polynomial")
    a = to_exact(a)
    H = cone_polynomial(a, Q.n)
    shifted = apply_AB(Q, 'A').scale(a) + Q.scale(Q.n + p + q)
    return (H * Q).laplacian() - shifted.scale(4)


def operator_identities(Q0):
    """Residuals of the two identities
        Delta(z1 zbar2 Q0) = z1 zbar2 Delta Q0 + 4 A Q0
        Delta(A Q0)        = A Delta Q0 + 8 B Q0
    Both are zero for every Q0."""
    n = Q0.n
    _require_plane(n)
    cross = BiPoly.variable(n, 1) * BiPoly.variable(n, 2, True)
    lap = Q0.laplacian()
    first = (cross * Q0).laplacian() - cross * lap \
        - apply_AB(Q0, 'A').scale(4)
    second = apply_AB(Q0, 'A').laplacian() - apply_AB(lap, 'A') \
        - apply_AB(Q0, 'B').scale(8)
    return first, second


def nilpotency(n, p, q):
    """Nilpotency index of A on P_{p,q}; at most p+q+1."""
    return operator_matrix(n, p, q, 'A').nilpotency_index()


def gram_asymmetry(n, p, q):
    """Largest |<A x, y> - <x, A y>|^2 over monomials x, y of P_{p,q} under
    the Fischer pairing; zero iff A is self-adjoint."""
    domain = monomial_basis(n, p, q)
    monomials = [domain.monomial(j) for j in range(len(domain))]
    images = [apply_AB(m, 'A') for m in monomials]
    worst = QQ(0)
    for x, ax in zip(monomials, images):
        for y, ay in zip(monomials, images):
            gap = abs_squared(fischer_inner(ax, y) - fischer_inner(x, ay))
            worst = max(worst, gap)
    return worst


def irreducibility_rank(a, n):
    """Rank of the coefficient matrix M[i][j] of z_i zbar_j in H = I + a E12.
    A (1,1)-form factors into linear pieces iff this rank is 1."""
    H = cone_polynomial(a, n)
    dod = {}
    for (alpha, beta), coef in H.terms.items():
        dod.setdefault(alpha.index(1), {})[beta.index(1)] = coef
    return exact_rank(DomainMatrix.from_dod(dod, (n, n), QQ_I))


def divisible_harmonics_dimension(a, n, p, q):
    """dim of {R in H_{p+1,q+1} : H divides R}, computed as the intersection
    of the column space of multiplication by H with the harmonic basis."""
    mult = operator_matrix(n, p, q, 'mult_H', a=a)
    harmonics = harmonic_basis(n, p + 1, q + 1).basis
    codomain = mult.codomain
    dod = {}
    for j, R in enumerate(harmonics):
        for i, coef in codomain.coordinates(R).items():
            dod.setdefault(i, {})[j] = coef
    span = DomainMatrix.from_dod(dod, (len(codomain), len(harmonics)), QQ_I)
    joined = mult.entries.hstack(span)
    return mult.rank() + len(harmonics) - exact_rank(joined)


# ---------------------------------------------------------------------------
# Certificate


@dataclass(frozen=True)
class KernelCell:
    p: int
    q: int
    domain_dim: int
    dim: Optional[int]
    staged_dim: Optional[int]
    nilpotency: Optional[int]
    eigen_shift_invertible: Optional[bool]
    witness: Optional[BiPoly] = None

    @property
    def tested(self):
        return self.dim is not None

    @property
    def trivial(self):
        return self.dim == 0 and self.staged_dim in (0, None)


def _certify_cell(a, n, p, q, s, limit):
    domain_dim = space_dimension(n, p, q)
    try:
        check_budget(domain_dim, limit)
        check_budget(space_dimension(n, p + s, q + s), limit,
                     what='P_{p+s,q+s}')
        direct = operator_matrix(n, p, q, 'delta_mult_H', a=a, s=s)
        kernel = direct.kernel()
        staged_dim = None
        if s > 1:
            staged = operator_matrix(n, p + s - 1, q + s - 1, 'delta_mult_H',
                                     a=a, s=1)
            staged_dim = staged.kernel_dimension()
        index = nilpotency(n, p, q)
        invertible = operator_matrix(n, p, q, 'eigen_shift', a=a).is_invertible()
    except ResourceLimitError as error:
        log.info("skipping P_(%d,%d): %s", p, q, error)
        return KernelCell(p, q, domain_dim, None, None, None, None)
    log.debug("P_(%d,%d): kernel %d, staged %s, nilpotency %s",
              p, q, len(kernel), staged_dim, index)
    return KernelCell(p, q, domain_dim, len(kernel), staged_dim, index,
                      invertible, kernel[0] if kernel else None)


@dataclass(frozen=True)
class Certificate:
    """Outcome of :func:`certify_nonharmonic`.

    :attr a: cone coefficient (ExactComplex).
    :attr range: requested (p_max, q_max).
    :attr tested_range: largest (p, q) box fully tested; equals ``range``
                        unless a resource limit was hit.
    :attr cells: one KernelCell per (p, q), in lexicographic order.
    """
    a: object
    n: int
    s: int
    range: Tuple[int, int]
    tested_range: Optional[Tuple[int, int]]
    cells: Tuple[KernelCell, ...]
    irreducible_rank: int
    gram_asymmetry: object
    config: dict = field(default_factory=dict)

    @property
    def complete(self):
        return all(cell.tested for cell in self.cells)

    @property
    def counterexample(self):
        for cell in self.cells:
            if cell.tested and not cell.trivial:
                return cell
        return None

    @property
    def degree_bound(self):
        box = self.range if self.complete else self.tested_range
        if box is None:
            return None
        return (box[0] + self.s, box[1] + self.s)

    @property
    def verdict(self):
        if self.counterexample is not None or self.irreducible_rank < 2:
            return 'counterexample-found'
        if not self.complete:
            if self.degree_bound is None:
                return 'partial-nothing-tested'
            return 'partial-non-harmonic-up-to-degree({},{})'.format(
                *self.degree_bound)
        return 'non-harmonic-up-to-degree({},{})'.format(*self.degree_bound)

    @property
    def exit_code(self):
        if self.verdict == 'counterexample-found':
            return 2
        return 0 if self.complete else 3

    def kernel_table(self):
        return pd.DataFrame.from_records(
            [(c.p, c.q, c.domain_dim, c.dim, c.staged_dim, c.nilpotency,
              c.eigen_shift_invertible) for c in self.cells],
            columns=['p', 'q', 'domain_dim', 'dim', 'staged_dim',
                     'nilpotency', 'eigen_shift_invertible'])

    def to_dict(self):
        kernels = []
        for cell in self.cells:
            entry = {'p': cell.p, 'q': cell.q, 'dim': cell.dim}
            if self.s > 1:
                entry['staged_dim'] = cell.staged_dim
            entry['nilpotency'] = cell.nilpotency
            entry['eigen_shift_invertible'] = cell.eigen_shift_invertible
            kernels.append(entry)
        witness = self.counterexample
        return {'a': format_complex(self.a),
                'n': self.n,
                's': self.s,
                'range': list(self.range),
                'tested_range': (list(self.tested_range)
                                 if self.tested_range is not None else None),
                'kernels': kernels,
                'irreducible_rank': self.irreducible_rank,
                'gram_asymmetry': rational_string(self.gram_asymmetry),
                'verdict': self.verdict,
                'counterexample': (poly_to_dict(witness.witness)
                                   if witness is not None
                                   and witness.witness is not None else None),
                'config': self.config}


def _tested_box(cells, p_max, q_max):
    tested = {(c.p, c.q) for c in cells if c.tested}
    best = None
    for d in range(max(p_max, q_max) + 1):
        box = (min(d, p_max), min(d, q_max))
        if all((p, q) in tested for p in range(box[0] + 1)
               for q in range(box[1] + 1)):
            best = box
        else:
            break
    return best


def certify_nonharmonic(a, n, p_max, q_max, s=1, config=None):
    """Exact certificate that Delta(H^s Q) = 0 forces Q = 0 on every P_{p,q}
    with p <= p_max and q <= q_max.

    For s >= 2 each cell also tests Q' -> Delta(H Q') on P_{p+s-1,q+s-1},
    the single step the power case reduces to.

    :param config: a :class:`conecert.config.Config`; supplies the matrix
                   budget and the worker count.
    """
    config = config or Config()
    _require_plane(n)
    a = _cone_coefficient(a)
    if s < 1:
        raise ValueError("the power s must be at least 1, got {}".format(s))
    if p_max < 0 or q_max < 0:
        raise ValueError("degree bounds must be non-negative")
    pairs = [(p, q) for p in range(p_max + 1) for q in range(q_max + 1)]

    def work(pair):
        return _certify_cell(a, n, pair[0], pair[1], s, config.max_matrix_dim)

    with WorkerMap(config.threads) as mapper:
        cells = list(progress(mapper(work, pairs), total=len(pairs),
                              desc='certify'))
    certificate = Certificate(
        a=a, n=n, s=s, range=(p_max, q_max),
        tested_range=_tested_box(cells, p_max, q_max),
        cells=tuple(cells),
        irreducible_rank=irreducibility_rank(a, n),
        gram_asymmetry=gram_asymmetry(n, 1, 0),
        config=config.to_dict())
    log.info("a=%s n=%d s=%d: %s", format_complex(a), n, s,
             certificate.verdict)
    return certificate


# ---------------------------------------------------------------------------
# Rotation sigma = diag(e^{i theta/2}, e^{-i theta/2}, 1, ..., 1)


def _phase_weight(alpha, beta):
    return alpha[0] - beta[0] - alpha[1] + beta[1]


def sigma_rotate(P, turns):
    """P(sigma z) for theta = turns * pi with rational ``turns``, exactly.

    With turns = u / v, the monomial z^a zbar^b picks up
    e^{i m theta / 2} = zeta^(m u), where m = a1 - b1 - a2 + b2 and
    zeta = e^{i pi / (2v)}. The result lives over QQ(zeta).
    """
    _require_plane(P.n)
    turns = Fraction(turns)
    order = 2 * turns.denominator
    field = root_of_unity_field(order)
    terms = {}
    for (alpha, beta), coef in P.terms.items():
        power = (_phase_weight(alpha, beta) * turns.numerator) % (2 * order)
        terms[(alpha, beta)] = field.embed(coef) * field.zeta ** power
    return ExtendedPoly(P.n, field, terms)


def sigma_matrix(n, theta):
    diagonal = np.ones(n, dtype=np.complex128)
    diagonal[0] = np.exp(0.5j * theta)
    diagonal[1] = np.exp(-0.5j * theta)
    return np.diag(diagonal)


def sigma_rotate_numeric(P, theta):
    """P(sigma z) for an arbitrary angle theta, with complex float
    coefficients."""
    _require_plane(P.n)
    terms = {}
    for (alpha, beta), coef in P.terms.items():
        phase = complex(np.exp(0.5j * _phase_weight(alpha, beta) * theta))
        terms[(alpha, beta)] = FLOAT_FIELD.embed(coef) * CC.convert(phase)
    return ExtendedPoly(P.n, FLOAT_FIELD, terms)


# ---------------------------------------------------------------------------
# Sampling the cone


@dataclass(frozen=True)
class ConeSample:
    """Points of H^{-1}(0).

    :attr slopes: the values t with H(1, t, 0, ...) = 0.
    :attr base_points: (1, t, 0, ...) for each slope.
    :attr points: base points followed by orbit samples lambda * z.
    :attr reason: why the sample is empty, if it is.
    """
    a: complex
    n: int
    slopes: Tuple[complex, ...]
    base_points: np.ndarray
    points: np.ndarray
    reason: str = ''

    @property
    def empty(self):
        return len(self.points) == 0

    def residuals(self):
        """|H(z)| / |z|^2 at every point."""
        if self.empty:
            return np.zeros(0)
        z = self.points
        values = self.a * z[:, 0] * np.conj(z[:, 1]) \
            + np.sum(np.abs(z) ** 2, axis=1)
        return np.abs(values) / np.sum(np.abs(z) ** 2, axis=1)

    def unit_points(self):
        return self.points / np.linalg.norm(self.points, axis=1)[:, np.newaxis]

    def hopf_coordinates(self):
        """Hopf coordinates of the base points (n = 2 only). On the unit
        sphere the cone is sin(2 eta) = 2/|a|, xi1 - xi2 = pi - arg a."""
        if self.n != 2:
            raise ValueError("Hopf coordinates need n=2, got n={}".format(self.n))
        return [HopfCoordinate.create_from_complex(z) for z in self.base_points]


def _as_complex(a):
    if isinstance(a, (int, float, complex, np.number)):
        return complex(a)
    return to_complex(to_exact(a))


def cone_sample(a, n, count=16):
    """Samples H^{-1}(0) for H = a z1 zbar2 + |z|^2.

    With z = (1, t, 0, ...), H = a conj(t) + 1 + |t|^2. Writing
    t = -rho a / |a| gives rho^2 - |a| rho + 1 = 0, so nonzero points
    exist iff |a| >= 2.

    :param count: number of orbit samples lambda * z added after the base
                  points, with lambda on a fixed grid of moduli and phases.
    """
    _require_plane(n)
    a = _as_complex(a)
    modulus = abs(a)
    if modulus < 2:
        reason = ("|t|^2 - |a||t| + 1 = 0 has no real root for |a| = {:.6g} < 2"
                  .format(modulus))
        log.info("empty cone sample: %s", reason)
        empty = np.zeros((0, n), dtype=np.complex128)
        return ConeSample(a, n, (), empty, empty, reason)
    root = np.sqrt(max(modulus ** 2 - 4, 0.0))
    rhos = sorted({(modulus - root) / 2, (modulus + root) / 2})
    slopes = tuple(-rho * a / modulus for rho in rhos)
    base = np.zeros((len(slopes), n), dtype=np.complex128)
    base[:, 0] = 1
    base[:, 1] = slopes
    moduli = np.linspace(0.5, 2.0, 4)
    orbit = []
    for m in range(count):
        lam = moduli[m % len(moduli)] * np.exp(2j * np.pi * m / max(count, 1))
        orbit.append(lam * base[m % len(base)])
    orbit = np.array(orbit, dtype=np.complex128).reshape(-1, n)
    return ConeSample(a, n, slopes, base, np.vstack([base, orbit]))


@dataclass(frozen=True)
class VanishingProfile:
    """How the harmonic basis of H_{p,q} behaves on sampled cone points.

    :attr max_moduli: largest |P(z)| over the unit cone samples, per basis
                      element.
    :attr annihilator_dim: numerical dimension of the subspace of H_{p,q}
                           vanishing at every sample.
    """
    a: complex
    p: int
    q: int
    harmonic_dim: int
    max_moduli: Tuple[float, ...]
    annihilator_dim: int

    def to_dict(self):
        return {'p': self.p, 'q': self.q, 'harmonic_dim': self.harmonic_dim,
                'max_moduli': list(self.max_moduli),
                'annihilator_dim': self.annihilator_dim}


def cone_vanishing_profile(a, p, q, n=2, count=24, tol=1e-9):
    """Evaluates harmonic_basis(n, p, q) on cone_sample(a, n) points.

    For n = 2 the cone is a union of two complex lines, so some nonzero
    harmonics vanish on it once dim H_{p,q} > 2; the profile reports the
    dimension of that subspace."""
    sample = cone_sample(a, n, count)
    if sample.empty:
        raise DegenerateConeError(sample.reason)
    points = sample.unit_points()
    basis = harmonic_basis(n, p, q).basis
    values = np.column_stack([P.evaluate(points) for P in basis]) \
        if basis else np.zeros((len(points), 0))
    moduli = tuple(float(np.max(np.abs(values[:, j])))
                   for j in range(values.shape[1]))
    annihilator = null_space(values, rcond=tol).shape[1] if basis else 0
    return VanishingProfile(_as_complex(a), p, q, len(basis), moduli,
                            annihilator)
