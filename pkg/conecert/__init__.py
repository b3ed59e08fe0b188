import numpy as np

try:
    from pkg_resources import resource_filename
except ImportError:
    from importlib.resources import files

    def resource_filename(package, resource):
        return str(files(package).joinpath(resource))

from .config import Config
from .cone import certify_nonharmonic
from .cone import cone_sample
from .harmonic import fischer_decompose
from .harmonic import harmonic_basis
from .laguerre import laguerre_phi
from .poly import BiPoly
from .polyio import read_poly
from .tsm import twisted_mean

sample = resource_filename(__name__, 'sample_data/z1bar.json')


def demo():
    """
    A quick tour of this package. It certifies the cone of
    H = 3 z1 zbar2 + |z|^2 at small degree, samples points of the cone and
    computes a weighted twisted spherical mean of phi_1 at one of them.
    """
    print("Certifying H = 3 z1 zbar2 + |z|^2 on P_{p,q}, p, q <= 2...")
    certificate = certify_nonharmonic(3, 2, 2, 2)
    print("Verdict: {}".format(certificate.verdict))
    print(certificate.kernel_table())
    print("---")
    print("Sampling the cone...")
    points = cone_sample(3, 2, count=4)
    for t in points.slopes:
        print("Slope t = {:.6f}: (1, t) lies on the cone".format(t))
    print("Largest |H(z)| / |z|^2 over the sample: {:.2e}".format(
        np.max(points.residuals())))
    print("---")
    print("Loading the weight zbar1 from the sample data...")
    weight = read_poly(sample)
    report = twisted_mean(laguerre_phi(1, 1, 2), points.points[0], 1.0,
                          weight=weight)
    print("phi_1 x nu_1 at the first cone point: {:.6f} (error estimate "
          "{:.1e})".format(report.value, report.err_est))
