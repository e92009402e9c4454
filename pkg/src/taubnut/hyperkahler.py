"""The Kahler triple, quaternion algebra, and Killing/moment identities.

With eta = dt + A_i dx^i and alpha = eta / V, the three Kahler forms are

    omega_I = dx1 ^ eta + V dx2 ^ dx3,
    omega_J = dx2 ^ eta + V dx3 ^ dx1,
    omega_K = dx3 ^ eta + V dx1 ^ dx2,

equivalently V (dx_c ^ alpha + dx_a ^ dx_b) for cyclic (c, a, b).  Each is
closed precisely because d(eta) = *dV, and each has omega ^ omega = 2 V
d^4x, twice the Riemannian volume form.

Endomorphism conventions.  The tangent endomorphism M_c is defined by
omega_c(X, Y) = g(M_c X, Y); with the cyclic labels above these satisfy
M_I^2 = -Id and M_I M_J = M_K.  On covectors two conventions appear:

- the index-raised action N_c = g M_c g^{-1}, for which N_I dx1 = eta/V
  and N_I dx2 = dx3 (the defining relations of the complex structure on
  the cotangent bundle);
- precomposition beta -> beta o M_c, for which alpha o M_I = dx1 (the
  moment-map normalization; note iota_W omega_I = -dx1 with W = d_t).

Both are exercised by the checks below under their own names.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ChartPoint, metric_jets_batch
from .potential import ensure_admissible

_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def kahler_form_components(V, A):
    """Component arrays omega[n, c, mu, nu] of the three Kahler forms."""
    n = V.shape[0]
    omega = np.zeros((n, 3, 4, 4))
    for c, a, b in _CYCLIC:
        omega[:, c, c, a] = A[:, a]
        omega[:, c, c, b] = A[:, b]
        omega[:, c, c, 3] = 1.0
        omega[:, c, a, b] = V
    return omega - omega.transpose(0, 1, 3, 2)


def kahler_form_derivatives(V, dV, A, dA):
    """Spatial derivatives domega[n, s, c, mu, nu] of the form components."""
    n = V.shape[0]
    dom = np.zeros((n, 3, 3, 4, 4))
    for c, a, b in _CYCLIC:
        dom[:, :, c, c, a] = dA[:, :, a]
        dom[:, :, c, c, b] = dA[:, :, b]
        dom[:, :, c, a, b] = dV
    return dom - dom.transpose(0, 1, 2, 4, 3)


def tangent_endomorphisms(omega, gi):
    """M_c with omega_c(X, Y) = g(M_c X, Y): M_c = -g^{-1} omega_c."""
    return -np.einsum("nrm,ncmv->ncrv", gi, omega)


@dataclass(frozen=True)
class KahlerTriple:
    """Form components and tangent endomorphisms at one point."""

    omega_I: np.ndarray
    omega_J: np.ndarray
    omega_K: np.ndarray
    I: np.ndarray
    J: np.ndarray
    K: np.ndarray

    @property
    def forms(self):
        return (self.omega_I, self.omega_J, self.omega_K)

    @property
    def endos(self):
        return (self.I, self.J, self.K)


@dataclass(frozen=True)
class KillingData:
    """The circle generator W = d_t, its metric dual, and |W|^{-2}."""

    W: np.ndarray
    alpha: np.ndarray      # g(W, .) = eta / V, chart components
    V_from_W: float        # 1 / g(W, W)


def _point_fields(config, p):
    gauge = p.resolved_gauge(config)
    g, dg, ddg, gi = metric_jets_batch(config, p.x[None, :], gauge)
    V = 1.0 / g[:, 3, 3]
    A = g[:, 3, :3] * V[:, None]
    return g, dg, gi, V, A


def kahler_forms(config, p):
    """The Kahler triple at a chart point."""
    g, dg, gi, V, A = _point_fields(config, p)
    omega = kahler_form_components(V, A)
    endo = tangent_endomorphisms(omega, gi)
    return KahlerTriple(
        omega[0, 0], omega[0, 1], omega[0, 2], endo[0, 0], endo[0, 1], endo[0, 2]
    )


def killing_data(config, p):
    g, dg, gi, V, A = _point_fields(config, p)
    W = np.array([0.0, 0.0, 0.0, 1.0])
    alpha = g[0, 3, :].copy()
    return KillingData(W, alpha, float(1.0 / g[0, 3, 3]))


def closedness_residual_batch(config, xs, gauge=None):
    """Relative max component of d(omega_c) per point and form, shape (N, 3).

    The exterior derivative is assembled from the jet derivatives of the
    form components over all four index triples; for the model families it
    collapses to d_c V - (curl A)_c and vanishes.
    """
    from . import backend
    from .connection import connection_batch, GaugeChart

    xs = ensure_admissible(config, xs)
    if gauge is None:
        gauge = GaugeChart.auto(config.k)
    kern = backend.kernels()
    u, du, ddu = kern.potential_jets(config.centers_array, config.masses_array, xs)
    A, dA, ddA = connection_batch(config, gauge, xs)
    V = 1.0 + u
    omega = kahler_form_components(V, A)
    dom4 = np.zeros((xs.shape[0], 4, 3, 4, 4))
    dom4[:, :3] = kahler_form_derivatives(V, du, A, dA)
    # (d omega)_{l m v} = d_l omega_{m v} + d_m omega_{v l} + d_v omega_{l m}
    d_omega = (
        dom4.transpose(0, 2, 1, 3, 4)
        + dom4.transpose(0, 2, 3, 4, 1)
        + dom4.transpose(0, 2, 4, 1, 3)
    )
    num = np.abs(d_omega).max(axis=(2, 3, 4))
    scale = 1.0 + np.abs(du).max(axis=1)
    return num / scale[:, None]


def closedness_residual(config, p):
    """Per-form residuals of d(omega) at one chart point, shape (3,)."""
    res = closedness_residual_batch(config, p.x[None, :], p.resolved_gauge(config))
    return res[0]


@dataclass(frozen=True)
class QuaternionReport:
    """Residuals of the pointwise quaternion and compatibility algebra."""

    squares: float         # max |M_c^2 + Id|
    products: float        # max |M_I M_J - M_K| and cyclic
    compatibility: float   # max |M_c^T g - omega_c|
    isometry: float        # max |M_c^T g M_c - g|
    pullback: float        # |N_I dx1 - alpha|, |N_I dx2 - dx3| etc.

    def max_residual(self):
        return max(self.squares, self.products, self.compatibility, self.isometry, self.pullback)


def quaternion_residual_arrays(g, gi, omega):
    """Batched residual maxima for the quaternion/compatibility algebra.

    Returns (squares, products, compatibility, isometry, pullback), each of
    shape (N,), normalized by the squared endomorphism scale.
    """
    endo = tangent_endomorphisms(omega, gi)
    eye = np.eye(4)
    scale = 1.0 + np.einsum("ncrv,ncrv->n", endo, endo)
    sq = np.einsum("ncrl,nclv->ncrv", endo, endo) + eye[None, None]
    squares = np.abs(sq).max(axis=(1, 2, 3)) / scale

    prod = np.stack(
        [
            np.einsum("nrl,nlv->nrv", endo[:, 0], endo[:, 1]) - endo[:, 2],
            np.einsum("nrl,nlv->nrv", endo[:, 1], endo[:, 2]) - endo[:, 0],
            np.einsum("nrl,nlv->nrv", endo[:, 2], endo[:, 0]) - endo[:, 1],
        ],
        axis=1,
    )
    products = np.abs(prod).max(axis=(1, 2, 3)) / scale

    compat = np.einsum("ncrm,nrv->ncmv", endo, g) - omega
    compatibility = np.abs(compat).max(axis=(1, 2, 3)) / scale

    iso = np.einsum("ncrm,nrl,nclv->ncmv", endo, g, endo) - g[:, None]
    isometry = np.abs(iso).max(axis=(1, 2, 3)) / scale

    # cotangent action N_c = g M_c g^{-1}: N_c dx_c = alpha, N_c dx_a = dx_b
    N = np.einsum("nmr,ncrl,nlv->ncmv", g, endo, gi)
    alpha = g[:, 3, :]
    pullback = np.zeros(g.shape[0])
    for c, a, b in _CYCLIC:
        e_b = np.zeros(4)
        e_b[b] = 1.0
        r1 = np.abs(N[:, c, :, c] - alpha).max(axis=1)
        r2 = np.abs(N[:, c, :, a] - e_b[None, :]).max(axis=1)
        pullback = np.maximum(pullback, np.maximum(r1, r2))
    pullback = pullback / scale
    return squares, products, compatibility, isometry, pullback


def quaternion_check(config, p):
    """Quaternion-algebra residuals at one chart point."""
    g, dg, gi, V, A = _point_fields(config, p)
    omega = kahler_form_components(V, A)
    sq, pr, co, iso, pb = quaternion_residual_arrays(g, gi, omega)
    return QuaternionReport(float(sq[0]), float(pr[0]), float(co[0]), float(iso[0]), float(pb[0]))


@dataclass(frozen=True)
class KillingMomentReport:
    """Residuals of the Killing and moment-map identities."""

    moment: float          # max_c |iota_W omega_c + dx_c|
    lie_derivative: float  # |L_W g|; zero by t-invariance of the chart data
    coframe: float         # max_c |alpha o M_c - dx_c|
    norm: float            # | |W|^{-2} - V |
    alpha_residual: float  # max |alpha - eta/V|

    def max_residual(self):
        return max(self.moment, self.lie_derivative, self.coframe, self.norm, self.alpha_residual)


def killing_moment_arrays(g, gi, omega, V, A):
    """Batched residuals for the Killing/moment identities, each (N,)."""
    n = g.shape[0]
    endo = tangent_endomorphisms(omega, gi)
    alpha = g[:, 3, :]
    moment = np.zeros(n)
    coframe = np.zeros(n)
    for c in range(3):
        e_c = np.zeros(4)
        e_c[c] = 1.0
        # iota_W omega = omega[3, :] row; want -dx_c
        moment = np.maximum(moment, np.abs(omega[:, c, 3, :] + e_c[None, :]).max(axis=1))
        # alpha o M_c: (alpha M)_v = alpha_r M^r_v; want +dx_c
        am = np.einsum("nr,nrv->nv", alpha, endo[:, c])
        coframe = np.maximum(coframe, np.abs(am - e_c[None, :]).max(axis=1))
    norm = np.abs(1.0 / g[:, 3, 3] - V)
    eta_over_V = np.concatenate([A, np.ones((n, 1))], axis=1) / V[:, None]
    alpha_residual = np.abs(alpha - eta_over_V).max(axis=1)
    return moment, coframe, norm, alpha_residual


def killing_moment_check(config, p):
    """Killing/moment residuals at one chart point.

    The Lie derivative of g along W = d_t vanishes identically because no
    chart component depends on t; it is reported as exactly zero.
    """
    g, dg, gi, V, A = _point_fields(config, p)
    omega = kahler_form_components(V, A)
    mo, co, no, al = killing_moment_arrays(g, gi, omega, V, A)
    return KillingMomentReport(float(mo[0]), 0.0, float(co[0]), float(no[0]), float(al[0]))


def coframe_orthogonality_residuals(g, gi):
    """Defects of: dx1, dx2, dx3, alpha mutually g-orthogonal, norms V^{-1/2}.

    The squared g-norms of all four covectors equal 1/V; returns the max
    deviation of the 4x4 Gram matrix from (1/V) Id, relative, shape (N,).
    """
    alpha = g[:, 3, :]
    basis = np.broadcast_to(np.eye(4)[:3], (g.shape[0], 3, 4)).copy()
    co = np.concatenate([basis, alpha[:, None, :]], axis=1)  # (n, 4, 4) covectors
    gram = np.einsum("nam,nmv,nbv->nab", co, gi, co)
    iV = g[:, 3, 3]
    expected = iV[:, None, None] * np.eye(4)[None]
    return np.abs(gram - expected).max(axis=(1, 2)) / (1.0 + iV)


def volume_form_residuals(g, omega):
    """Defect of omega_c ^ omega_c = 2 sqrt(det g) d^4x per form, (N, 3).

    The wedge coefficient is 2 (w01 w23 - w02 w13 + w03 w12) against
    dx1^dx2^dx3^dt, and sqrt(det g) = V.
    """
    coeff = 2.0 * (
        omega[:, :, 0, 1] * omega[:, :, 2, 3]
        - omega[:, :, 0, 2] * omega[:, :, 1, 3]
        + omega[:, :, 0, 3] * omega[:, :, 1, 2]
    )
    vol = np.sqrt(np.linalg.det(g))
    return np.abs(coeff - 2.0 * vol[:, None]) / (1.0 + 2.0 * vol[:, None])


def hyperkahler_residuals_batch(config, xs, gauge=None):
    """All pointwise hyperkahler residual families over a batch.

    Returns a dict of arrays: closedness (N, 3), squares, products,
    compatibility, isometry, pullback, moment, coframe, norm,
    alpha_residual, orthogonality (N,), volume_form (N, 3).
    """
    g, dg, ddg, gi = metric_jets_batch(config, xs, gauge)
    V = 1.0 / g[:, 3, 3]
    A = g[:, 3, :3] * V[:, None]
    omega = kahler_form_components(V, A)
    sq, pr, co, iso, pb = quaternion_residual_arrays(g, gi, omega)
    mo, cf, no, al = killing_moment_arrays(g, gi, omega, V, A)
    return {
        "closedness": closedness_residual_batch(config, xs, gauge),
        "squares": sq,
        "products": pr,
        "compatibility": co,
        "isometry": iso,
        "pullback": pb,
        "moment": mo,
        "coframe": cf,
        "norm": no,
        "alpha_residual": al,
        "orthogonality": coframe_orthogonality_residuals(g, gi),
        "volume_form": volume_form_residuals(g, omega),
    }
