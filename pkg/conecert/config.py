"""
Run configuration shared by the library and the command line.

A Config is embedded in every report; loading it back with
:meth:`Config.from_dict` reproduces the run.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import Optional

from .exceptions import SchemaError
from .utils import threads_from_env

log = logging.getLogger(__name__)

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


@dataclass(frozen=True)
class Config:
    """
    :attr quad_degree: sphere quadrature degree.
    :attr compare_degree: second degree, used for error estimates.
    :attr hermite_degree: Gauss-Hermite points per real axis.
    :attr laguerre_points: Gauss-Laguerre points for radial expansions.
    :attr abs_tol: absolute numeric tolerance.
    :attr rel_tol: relative numeric tolerance.
    :attr max_matrix_dim: largest dim P_{p,q} the certifier will assemble.
    :attr max_quad_nodes: largest sphere rule a twisted mean will build.
    :attr threads: worker cap.
    :attr seed: seed of the random samples drawn by ``verify all``.
    :attr out: output path, None for stdout.
    :attr verbosity: 0 warnings, 1 info, 2 debug.
    """
    quad_degree: int = 40
    compare_degree: int = 48
    hermite_degree: int = 30
    laguerre_points: int = 40
    abs_tol: float = 1e-8
    rel_tol: float = 1e-6
    max_matrix_dim: int = 4000
    max_quad_nodes: int = 2_000_000
    threads: int = 1
    seed: int = 20160101
    out: Optional[str] = None
    verbosity: int = 0

    @classmethod
    def from_env(cls, **overrides):
        return cls(threads=threads_from_env(), **overrides)

    def replace(self, **overrides):
        """Copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items()
                   if value is not None}
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, document, pointer='/config'):
        if not isinstance(document, dict):
            raise SchemaError(pointer, "expected an object")
        known = {field.name: field for field in dataclasses.fields(cls)}
        values = {}
        for key, value in document.items():
            if key not in known:
                raise SchemaError('{}/{}'.format(pointer, key),
                                  "unknown configuration field")
            values[key] = value
        return cls(**values)

    @property
    def log_level(self):
        return VERBOSITY_LEVELS[min(max(self.verbosity, 0), 2)]
