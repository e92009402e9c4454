"""The harmonic potential V and its dual curvature two-form Omega = *dV.

V(x) = 1 + sum_i 2 m_i / |x - a_i| is harmonic away from the centers and
tends to 1 at infinity.  Its Euclidean Hodge dual Omega = *dV (orientation
dx1 ^ dx2 ^ dx3 > 0) is the curvature two-form the monopole connection must
reproduce: d(eta) = Omega.  Components: Omega_23 = d1 V, Omega_31 = d2 V,
Omega_12 = d3 V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ExclusionBallError
from .jets import Jet2


@dataclass(frozen=True)
class TwoForm3:
    """A two-form on R^3 by its three independent components."""

    o23: float
    o31: float
    o12: float

    def as_vector(self):
        """The vector field dual under the fixed orientation."""
        return np.array([self.o23, self.o31, self.o12])


def ensure_admissible(config, xs):
    """Guard a batch of points against the exclusion balls.

    Raises ExclusionBallError naming the offending center; returns the
    points as a float64 (N, 3) array otherwise.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    if xs.ndim != 2 or xs.shape[1] != 3:
        raise ValueError("expected points of shape (N, 3), got %r" % (xs.shape,))
    if config.k:
        d = np.linalg.norm(xs[:, None, :] - config.centers_array[None, :, :], axis=2)
        flat = int(np.argmin(d))
        n_idx, c_idx = divmod(flat, config.k)
        if d[n_idx, c_idx] < config.exclusion_radius:
            raise ExclusionBallError(c_idx, float(d[n_idx, c_idx]), config.exclusion_radius)
    return xs


def potential_batch(config, xs):
    """(V, dV, ddV) arrays at admissible points, shapes (N,), (N,3), (N,3,3)."""
    xs = ensure_admissible(config, xs)
    kern = backend.kernels()
    u, du, ddu = kern.potential_jets(config.centers_array, config.masses_array, xs)
    return 1.0 + u, du, ddu


def eval_V(config, x):
    """The potential at one point as a full second-order jet."""
    V, dV, ddV = potential_batch(config, np.asarray(x, dtype=np.float64)[None, :])
    return Jet2(float(V[0]), dV[0], ddV[0])


def harmonic_residual_V(config, x):
    """Trace of the Hessian of V; zero away from centers up to rounding."""
    jet = eval_V(config, x)
    return float(np.trace(jet.hessian))


def harmonic_residual_batch(config, xs):
    """Relative harmonicity defect |tr Hess V| / (1 + |Hess V|) per point."""
    _, _, ddV = potential_batch(config, xs)
    tr = np.abs(np.trace(ddV, axis1=1, axis2=2))
    scale = 1.0 + np.sqrt(np.einsum("nij,nij->n", ddV, ddV))
    return tr / scale


def eval_Omega(config, x):
    """The two-form *dV at one point."""
    jet = eval_V(config, x)
    return TwoForm3(float(jet.gradient[0]), float(jet.gradient[1]), float(jet.gradient[2]))
