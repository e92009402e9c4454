"""Sphere quadrature: Gauss-Legendre in cos(theta) times uniform phi.

Gauss-Legendre nodes are interior to (-1, 1), so sphere grids never touch
the poles where fixed monopole charts have their Dirac strings; the phi
grid is a midpoint rule, spectrally accurate for periodic integrands.
Weights integrate dA = R^2 dcos(theta) dphi.  Node order is fixed
(theta-major), and numpy's pairwise summation makes the quadrature sum
deterministic for a given node layout regardless of worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureNodeError

DEFAULT_N_THETA = 64
DEFAULT_N_PHI = 128


def unit_sphere_nodes(n_theta=DEFAULT_N_THETA, n_phi=DEFAULT_N_PHI):
    """Directions (M, 3) and weights (M,) integrating over the unit sphere."""
    ct, w_ct = np.polynomial.legendre.leggauss(int(n_theta))
    phi = (np.arange(int(n_phi)) + 0.5) * (2.0 * np.pi / int(n_phi))
    st = np.sqrt(1.0 - ct * ct)
    dirs = np.stack(
        [
            np.outer(st, np.cos(phi)).ravel(),
            np.outer(st, np.sin(phi)).ravel(),
            np.outer(ct, np.ones_like(phi)).ravel(),
        ],
        axis=1,
    )
    weights = np.outer(w_ct, np.full(int(n_phi), 2.0 * np.pi / int(n_phi))).ravel()
    return dirs, weights


@dataclass(frozen=True)
class SphereQuadrature:
    """Product quadrature grid on a sphere of given center and radius."""

    center: np.ndarray
    radius: float
    n_theta: int = DEFAULT_N_THETA
    n_phi: int = DEFAULT_N_PHI
    nodes: np.ndarray = field(init=False, repr=False)
    normals: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).reshape(3)
        radius = float(self.radius)
        if radius <= 0:
            raise QuadratureNodeError("sphere radius must be positive, got %r" % (radius,))
        dirs, w = unit_sphere_nodes(self.n_theta, self.n_phi)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "normals", dirs)
        object.__setattr__(self, "nodes", center[None, :] + radius * dirs)
        object.__setattr__(self, "weights", w * radius * radius)

    def check_clear_of_centers(self, config, margin=None):
        """Every node must sit outside the exclusion balls (with margin)."""
        if config.k == 0:
            return
        margin = config.exclusion_radius if margin is None else margin
        d = np.linalg.norm(
            self.nodes[:, None, :] - config.centers_array[None, :, :], axis=2
        )
        worst = int(np.argmin(d))
        node_idx, c_idx = divmod(worst, config.k)
        if d[node_idx, c_idx] < margin:
            raise QuadratureNodeError(
                "quadrature node %d of the sphere at %s (R=%.4g) lies %.3e from "
                "center %d, under the guard %.3e"
                % (node_idx, np.array2string(self.center, precision=3),
                   self.radius, d[node_idx, c_idx], c_idx, margin)
            )


def integrate_sphere(quad, f):
    """Quadrature sum of a surface field over the sphere.

    ``f`` maps the node array (M, 3) to values (M,); the reduction order is
    fixed by the node layout.
    """
    values = np.asarray(f(quad.nodes), dtype=np.float64)
    if values.shape != (quad.nodes.shape[0],):
        raise ValueError(
            "surface field returned shape %r for %d nodes" % (values.shape, quad.nodes.shape[0])
        )
    return float(np.sum(values * quad.weights))


def radial_gauss_nodes(n_radial, upper):
    """Gauss-Legendre nodes/weights on [0, upper] per direction.

    ``upper`` may be an array (one bound per direction); returns nodes and
    weights of shape (n_radial,) + upper.shape.
    """
    x, w = np.polynomial.legendre.leggauss(int(n_radial))
    upper = np.asarray(upper, dtype=np.float64)
    half = 0.5 * upper
    nodes = half[None, ...] * (x.reshape((-1,) + (1,) * upper.ndim) + 1.0)
    weights = half[None, ...] * w.reshape((-1,) + (1,) * upper.ndim)
    return nodes, weights
