# Points of C^n: parsing, real/complex identification and Hopf coordinates.
import numpy as np

from .exceptions import DimensionMismatchError
from .exceptions import UsageError


class HopfCoordinate():
    """
    Hopf coordinates on the unit sphere of C^2:
    z1 = cos(eta) e^{i xi1}, z2 = sin(eta) e^{i xi2}, 0 <= eta <= pi/2.
    """
    def __init__(self, eta, xi1, xi2):
        self.eta = eta
        self.xi1 = xi1
        self.xi2 = xi2

    def __str__(self):
        return 'hopf: eta={0}, xi1={1}, xi2={2}'.format(
            self.eta, self.xi1, self.xi2)

    def to_dict(self):
        return {'eta': float(self.eta), 'xi1': float(self.xi1),
                'xi2': float(self.xi2)}

    @classmethod
    def create_from_complex(cls, z):
        """Hopf coordinates of z / |z| for a nonzero z in C^2."""
        z = np.asarray(z, dtype=np.complex128)
        if z.shape != (2,):
            raise DimensionMismatchError(2, z.shape[0] if z.ndim else 0,
                                         what='point dimension')
        norm = np.linalg.norm(z)
        if norm == 0:
            raise ValueError("the origin has no Hopf coordinates")
        z = z / norm
        eta = np.arctan2(abs(z[1]), abs(z[0]))
        return cls(eta, np.angle(z[0]), np.angle(z[1]))

    def to_complex(self, radius=1.0):
        return radius * np.array([np.cos(self.eta) * np.exp(1j * self.xi1),
                                  np.sin(self.eta) * np.exp(1j * self.xi2)])


def complex_to_real(z):
    """(z_1, ..., z_n) -> (Re z_1, Im z_1, ..., Re z_n, Im z_n), along the
    last axis."""
    z = np.asarray(z, dtype=np.complex128)
    return np.stack([z.real, z.imag], axis=-1).reshape(z.shape[:-1] + (-1,))


def real_to_complex(v):
    """Inverse of :func:`complex_to_real`."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] % 2:
        raise ValueError("a real vector of odd length has no complex form")
    pairs = v.reshape(v.shape[:-1] + (-1, 2))
    return pairs[..., 0] + 1j * pairs[..., 1]


def hermitian_twist(z, w):
    """Im(z . conj(w)) = Im(sum_j z_j conj(w_j)), broadcast over w."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    return np.imag(np.sum(z * np.conj(w), axis=-1))


def parse_point(text, n):
    """Reads "re1,im1,...,ren,imn" into a complex vector of length n."""
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise UsageError("cannot read point '{}': expected {} comma separated "
                         "numbers".format(text, 2 * n))
    if len(values) != 2 * n:
        raise UsageError("point '{}' has {} numbers; n={} needs {} "
                         "(re1,im1,...)".format(text, len(values), n, 2 * n))
    return real_to_complex(np.array(values))


def format_point(z):
    return ','.join(repr(float(x)) for x in complex_to_real(z))


def random_points(rng, count, n, max_norm=1.0):
    """``count`` points of C^n in random directions, with norms drawn
    uniformly from [0.1, 1] * max_norm."""
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    z /= np.linalg.norm(z, axis=1)[:, np.newaxis]
    return z * (max_norm * rng.uniform(0.1, 1.0, count))[:, np.newaxis]
