"""Construction and verification of ALF gravitational instantons of cyclic type.

The package builds the two Gibbons-Hawking families over R^3 from explicit
data (a mass parameter m and NUT centers a_1..a_k): the flat model
R^3 x S^1 for k = 0 and the multi-Taub-NUT metrics for k >= 1. Every
structural identity of the construction (harmonic potential, monopole
curvature d(eta) = *dV, the hyperkahler 2-form algebra, Ricci-flatness,
flux quantization, the boundary-integral mass, fiber lengths, volume
growth, curvature decay) is exposed as a numeric check with explicit
tolerances, orchestrated by :func:`taubnut.suite.run_suite` and the
``taubnut`` command line tool.
"""

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("taubnut")
except _metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .config import InstantonConfig, preset, preset_names
from .jets import Jet2, fd_oracle
from .suite import make_manifest, run_suite

__all__ = [
    "__version__",
    "InstantonConfig",
    "preset",
    "preset_names",
    "Jet2",
    "fd_oracle",
    "make_manifest",
    "run_suite",
]
