"""The Gibbons-Hawking metric and its curvature apparatus.

In chart coordinates (x1, x2, x3, t) the metric g = V dx^2 + V^{-1} eta^2
has components

    g_ij = V delta_ij + A_i A_j / V,   g_it = A_i / V,   g_tt = 1 / V,

with det g = V^2, closed-form inverse, and all components t-invariant.
Christoffel symbols, the Riemann tensor R^r_sab, Ricci, and |Riem|^2
follow from the metric 2-jet.  Sign convention: the round two-sphere has
positive sectional curvature (R^theta_{phi theta phi} = sin^2 theta for
the unit sphere), locked by a unit test on a degenerate product fixture.

Derivatives of Gamma are assembled from the stored second derivatives of
g (product rule on g^{-1}), never from a third jet order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .connection import GaugeChart, connection_batch
from .errors import ConfigError
from .potential import ensure_admissible


@dataclass(frozen=True)
class ChartPoint:
    """Evaluation point: base x, fiber angle t in [0, L_inf), gauge."""

    x: np.ndarray
    t: float = 0.0
    gauge: GaugeChart = None

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64).reshape(3))
        object.__setattr__(self, "t", float(self.t))

    def resolved_gauge(self, config):
        if self.gauge is not None:
            return self.gauge
        return GaugeChart.auto(config.k)


@dataclass(frozen=True)
class CotensorFrame:
    """Metric, inverse, Christoffel, and curvature components at a point.

    The metric block carries its first and second derivative arrays (the
    jet data downstream contractions need); Riemann is R^r_sab.
    """

    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray = None
    ddg: np.ndarray = None
    gamma: np.ndarray = None
    riem: np.ndarray = None
    ric: np.ndarray = None
    riem_norm2: float = None

    @property
    def riem_norm(self):
        return float(np.sqrt(max(self.riem_norm2, 0.0)))


def _field_jets(config, p_or_xs, gauge=None):
    if isinstance(p_or_xs, ChartPoint):
        xs = p_or_xs.x[None, :]
        gauge = p_or_xs.resolved_gauge(config)
    else:
        xs = ensure_admissible(config, p_or_xs)
        if gauge is None:
            gauge = GaugeChart.auto(config.k)
    kern = backend.kernels()
    u, du, ddu = kern.potential_jets(config.centers_array, config.masses_array, xs)
    A, dA, ddA = connection_batch(config, gauge, xs)
    return xs, (u, du, ddu), (A, dA, ddA)


def metric_jets_batch(config, xs, gauge=None):
    """(g, dg, ddg, g_inv) arrays at admissible points."""
    _, (u, du, ddu), (A, dA, ddA) = _field_jets(config, xs, gauge)
    kern = backend.kernels()
    g, dg, ddg = kern.gh_metric_jets(u, du, ddu, A, dA, ddA)
    gi = kern.gh_inverse_metric(u, A)
    return g, dg, ddg, gi


def model_metric_batch(config, xs, gauge=None):
    """(h, dh, ddh, h_inv) of the asymptotic model h = dx^2 + eta^2."""
    _, _, (A, dA, ddA) = _field_jets(config, xs, gauge)
    kern = backend.kernels()
    h, dh, ddh = kern.model_metric_jets(A, dA, ddA)
    hi = kern.model_inverse_metric(A)
    return h, dh, ddh, hi


def metric(config, p):
    """CotensorFrame with the metric block (components + jets + inverse)."""
    g, dg, ddg, gi = metric_jets_batch(config, p.x[None, :], p.resolved_gauge(config))
    return CotensorFrame(g=g[0], g_inv=gi[0], dg=dg[0], ddg=ddg[0])


def inverse_metric(frame):
    """Closed-form inverse stored on the frame (g . g_inv = Id)."""
    return frame.g_inv


def christoffel(config, p):
    """Levi-Civita symbols Gamma^l_mv at a chart point."""
    g, dg, ddg, gi = metric_jets_batch(config, p.x[None, :], p.resolved_gauge(config))
    kern = backend.kernels()
    return kern.christoffel(gi, dg)[0]


def curvature_batch(config, xs, gauge=None):
    """Batched full curvature pipeline.

    Returns a dict with g, g_inv, dg, ddg, gamma, riem, ric, riem_norm2,
    riem_norm arrays over the points.
    """
    g, dg, ddg, gi = metric_jets_batch(config, xs, gauge)
    kern = backend.kernels()
    gamma, riem, ric, riem_norm2 = kern.curvature(g, gi, dg, ddg)
    return {
        "g": g,
        "g_inv": gi,
        "dg": dg,
        "ddg": ddg,
        "gamma": gamma,
        "riem": riem,
        "ric": ric,
        "riem_norm2": riem_norm2,
        "riem_norm": np.sqrt(np.maximum(riem_norm2, 0.0)),
    }


def full_frame(config, p):
    """CotensorFrame with metric and curvature blocks at one point."""
    data = curvature_batch(config, p.x[None, :], p.resolved_gauge(config))
    return CotensorFrame(
        g=data["g"][0],
        g_inv=data["g_inv"][0],
        dg=data["dg"][0],
        ddg=data["ddg"][0],
        gamma=data["gamma"][0],
        riem=data["riem"][0],
        ric=data["ric"][0],
        riem_norm2=float(data["riem_norm2"][0]),
    )


def riemann(config, p):
    return full_frame(config, p).riem


def ricci(config, p):
    return full_frame(config, p).ric


def riem_norm(config, p):
    return full_frame(config, p).riem_norm


def curvature_from_metric_jets(g, dg, ddg, g_inv=None):
    """Curvature of an arbitrary t-invariant metric given as raw jets.

    Accepts single-point (4,4)-shaped or batched (N,4,4)-shaped data; the
    inverse defaults to generic LU inversion.  This is the entry point for
    non-Gibbons-Hawking fixtures (product metrics, sphere factors).
    """
    g = np.asarray(g, dtype=np.float64)
    single = g.ndim == 2
    if single:
        g = g[None]
        dg = np.asarray(dg, dtype=np.float64)[None]
        ddg = np.asarray(ddg, dtype=np.float64)[None]
        if g_inv is not None:
            g_inv = np.asarray(g_inv, dtype=np.float64)[None]
    if g_inv is None:
        g_inv = np.linalg.inv(g)
    kern = backend.kernels()
    gamma, riem, ric, riem_norm2 = kern.curvature(g, g_inv, dg, ddg)
    if single:
        return gamma[0], riem[0], ric[0], float(riem_norm2[0])
    return gamma, riem, ric, riem_norm2


def ricci_residual_batch(config, xs, gauge=None):
    """Relative Ricci-flatness defect max|Ric| / (1 + |Riem|) per point."""
    data = curvature_batch(config, xs, gauge)
    num = np.abs(data["ric"]).max(axis=(1, 2))
    return num / (1.0 + data["riem_norm"])


def riemann_symmetry_residuals(riem, g, gi):
    """Max relative defects of the algebraic Riemann symmetries.

    Returns (antisym_last, antisym_first, pair_symmetry, first_bianchi)
    over a batch, each normalized by (1 + max |R_abcd|).
    """
    low = np.einsum("nar,nrbcd->nabcd", g, riem)
    scale = 1.0 + np.abs(low).max(axis=(1, 2, 3, 4))
    anti_last = np.abs(low + low.transpose(0, 1, 2, 4, 3)).max(axis=(1, 2, 3, 4))
    anti_first = np.abs(low + low.transpose(0, 2, 1, 3, 4)).max(axis=(1, 2, 3, 4))
    pair = np.abs(low - low.transpose(0, 3, 4, 1, 2)).max(axis=(1, 2, 3, 4))
    bianchi = np.abs(
        low + low.transpose(0, 1, 3, 4, 2) + low.transpose(0, 1, 4, 2, 3)
    ).max(axis=(1, 2, 3, 4))
    return anti_last / scale, anti_first / scale, pair / scale, bianchi / scale


def metric_compatibility_residual(config, xs, gauge=None):
    """Max |nabla g| per point, reconstructed from Gamma (should vanish)."""
    g, dg, ddg, gi = metric_jets_batch(config, xs, gauge)
    kern = backend.kernels()
    gamma = kern.christoffel(gi, dg)
    dg4 = np.zeros((g.shape[0], 4, 4, 4))
    dg4[:, :3] = dg
    nabla = (
        dg4
        - np.einsum("nlsa,nlb->nsab", gamma, g)
        - np.einsum("nlsb,nal->nsab", gamma, g)
    )
    return np.abs(nabla).max(axis=(1, 2, 3))


def laplace_beltrami(config, f, p):
    """Laplace-Beltrami operator on a fiber-invariant scalar at a point.

    ``f`` maps a base point (3,) to a Jet2.  Uses the contraction form
    Delta f = g^{mn} Hess(f)_mn - g^{mn} Gamma^l_mn d_l f, equivalent to
    the divergence form for t-invariant data.
    """
    jet = f(p.x)
    g, dg, ddg, gi = metric_jets_batch(config, p.x[None, :], p.resolved_gauge(config))
    kern = backend.kernels()
    gamma = kern.christoffel(gi, dg)[0]
    gi = gi[0]
    grad4 = np.zeros(4)
    grad4[:3] = jet.gradient
    hess4 = np.zeros((4, 4))
    hess4[:3, :3] = jet.hessian
    contracted_gamma = np.einsum("mn,lmn->l", gi, gamma)
    return float(np.einsum("mn,mn->", gi, hess4) - contracted_gamma @ grad4)


def coordinate_laplacian_batch(config, xs, gauge=None):
    """Delta_g x_l for the three coordinate functions, shape (N, 3).

    The coordinates have vanishing Hessian, so the Laplacian reduces to
    minus the contracted Christoffel symbols.
    """
    g, dg, ddg, gi = metric_jets_batch(config, xs, gauge)
    kern = backend.kernels()
    gamma = kern.christoffel(gi, dg)
    return -np.einsum("nmv,nlmv->nl", gi, gamma)[:, :3]
