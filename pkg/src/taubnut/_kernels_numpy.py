"""Vectorized numpy implementations of the hot per-point kernels.

This module is the reference implementation; ``_kernels_numba`` mirrors it
with jitted loops. Both expose the same batched contracts on float64 arrays.

Index conventions (shared by both backends):

- chart coordinates are ordered (x1, x2, x3, t) = indices (0, 1, 2, 3);
- ``du[n, j]`` is d_j u, ``ddu[n, j, k]`` is d_j d_k u;
- ``dA[n, j, i]`` is d_j A_i and ``ddA[n, j, k, i]`` is d_j d_k A_i;
- ``dg[n, s, a, b]`` is d_s g_ab with s spatial (fields are t-invariant);
- ``gamma[n, l, a, b]`` is Gamma^l_ab; ``riem[n, r, s, a, b]`` is R^r_sab
  with R^r_sab = d_a Gamma^r_bs - d_b Gamma^r_as + Gamma Gamma - Gamma Gamma.

The Gibbons-Hawking chart metric with V = 1 + u and connection form
eta = dt + A_i dx^i is

    g_ij = V delta_ij + A_i A_j / V,   g_it = A_i / V,   g_tt = 1 / V,

with det g = V^2 and closed-form inverse g^ij = delta_ij / V,
g^it = -A_i / V, g^tt = V + |A|^2 / V. The asymptotic model metric
h = dx^2 + eta^2 has h_ij = delta_ij + A_i A_j, h_it = A_i, h_tt = 1,
det h = 1, h^ij = delta_ij, h^it = -A_i, h^tt = 1 + |A|^2.
"""

from __future__ import annotations

import numpy as np

_EYE3 = np.eye(3)


def potential_jets(centers, masses, xs):
    """Jets of u = sum_i 2 m_i / |x - a_i| (so V = 1 + u).

    Returns (u, du, ddu) with shapes (N,), (N, 3), (N, 3, 3).
    """
    n = xs.shape[0]
    if centers.shape[0] == 0:
        return np.zeros(n), np.zeros((n, 3)), np.zeros((n, 3, 3))
    d = xs[:, None, :] - centers[None, :, :]  # (N, k, 3)
    r2 = np.einsum("nki,nki->nk", d, d)
    r = np.sqrt(r2)
    w = 2.0 * masses[None, :] / r
    u = w.sum(axis=1)
    du = np.einsum("nk,nki->ni", -w / r2, d)
    ddu = np.einsum("nk,nki,nkj->nij", 3.0 * w / (r2 * r2), d, d)
    ddu -= np.einsum("nk,ij->nij", w / r2, _EYE3)
    return u, du, ddu


def resolve_charts(centers, prefs, xs):
    """Per-point chart signs (N, k): +1 for chart N, -1 for chart S.

    ``prefs`` holds one int per center: +1 fixes N, -1 fixes S, 0 chooses
    automatically by the sign of (x - a_i)_3, which keeps every point at
    angular distance >= pi/2 from the active Dirac string.
    """
    n = xs.shape[0]
    k = centers.shape[0]
    if k == 0:
        return np.zeros((n, 0), dtype=np.int8)
    d3 = xs[:, None, 2] - centers[None, :, 2]
    auto = np.where(d3 >= 0.0, 1, -1).astype(np.int8)
    fixed = np.broadcast_to(prefs[None, :], (n, k)).astype(np.int8)
    return np.where(fixed == 0, auto, fixed)


def monopole_jets(centers, strengths, charts, xs):
    """Jets of the total Dirac monopole potential A = sum_i A^(i).

    In coordinates relative to a center, chart sign s = +1 (N) or -1 (S),

        A = 2 m s (xi_2, -xi_1, 0) / D,     D = r^2 + s r xi_3,

    which equals 2m (cos(theta) -+ 1) dphi; the chart-N string is the -e3
    ray and the chart-S string the +e3 ray. Returns (A, dA, ddA) with
    shapes (N, 3), (N, 3, 3), (N, 3, 3, 3).
    """
    n = xs.shape[0]
    A = np.zeros((n, 3))
    dA = np.zeros((n, 3, 3))
    ddA = np.zeros((n, 3, 3, 3))
    for i in range(centers.shape[0]):
        xi = xs - centers[i][None, :]
        r = np.sqrt(np.einsum("ni,ni->n", xi, xi))
        s = charts[:, i].astype(np.float64)
        D = r * r + s * r * xi[:, 2]
        P = np.stack([xi[:, 1], -xi[:, 0], np.zeros(n)], axis=1)
        dP = np.zeros((n, 3, 3))  # dP[n, j, i] = d_j P_i
        dP[:, 1, 0] = 1.0
        dP[:, 0, 1] = -1.0
        dD = 2.0 * xi + s[:, None] * (xi[:, 2, None] * xi / r[:, None])
        dD[:, 2] += s * r
        ddD = 2.0 * np.broadcast_to(_EYE3, (n, 3, 3)).copy()
        ddD += s[:, None, None] * (
            np.einsum("nj,k->njk", xi / r[:, None], _EYE3[2])
            + np.einsum("j,nk->njk", _EYE3[2], xi / r[:, None])
            + np.einsum("n,jk->njk", xi[:, 2] / r, _EYE3)
            - np.einsum("n,nj,nk->njk", xi[:, 2] / r**3, xi, xi)
        )
        c = (2.0 * strengths[i] * s)[:, None]
        iD = 1.0 / D
        A += c * P * iD[:, None]
        # quotient rule: d(P/D) = dP/D - P dD/D^2
        dA += c[:, :, None] * (
            dP * iD[:, None, None]
            - np.einsum("ni,nj->nji", P, dD) * (iD * iD)[:, None, None]
        )
        # second order; ddP = 0
        ddA += c[:, :, None, None] * (
            -(
                np.einsum("nji,nk->njki", dP, dD)
                + np.einsum("nki,nj->njki", dP, dD)
                + np.einsum("ni,njk->njki", P, ddD)
            )
            * (iD * iD)[:, None, None, None]
            + 2.0 * np.einsum("ni,nj,nk->njki", P, dD, dD) * (iD**3)[:, None, None, None]
        )
    return A, dA, ddA


def _product_jets(f, df, ddf, g, dg, ddg):
    # jets of the pointwise product of two scalar batches
    v = f * g
    dv = df * g[:, None] + f[:, None] * dg
    cross = np.einsum("nj,nk->njk", df, dg)
    ddv = ddf * g[:, None, None] + f[:, None, None] * ddg + cross + cross.transpose(0, 2, 1)
    return v, dv, ddv


def gh_metric_jets(u, du, ddu, A, dA, ddA):
    """Gibbons-Hawking metric components and their first two derivatives.

    Returns (g, dg, ddg) with shapes (N, 4, 4), (N, 3, 4, 4), (N, 3, 3, 4, 4).
    """
    n = u.shape[0]
    V = 1.0 + u
    iV = 1.0 / V
    dw = -du * (iV * iV)[:, None]
    ddw = -ddu * (iV * iV)[:, None, None] + 2.0 * np.einsum(
        "n,nj,nk->njk", iV**3, du, du
    )
    # P_ij = A_i A_j and its jets
    P = np.einsum("ni,nj->nij", A, A)
    dP = np.einsum("nsi,nj->nsij", dA, A) + np.einsum("ni,nsj->nsij", A, dA)
    ddP = (
        np.einsum("nsti,nj->nstij", ddA, A)
        + np.einsum("ni,nstj->nstij", A, ddA)
        + np.einsum("nsi,ntj->nstij", dA, dA)
        + np.einsum("nti,nsj->nstij", dA, dA)
    )
    # B_i = A_i / V, G_ij = A_i A_j / V
    B = A * iV[:, None]
    dB = dA * iV[:, None, None] + np.einsum("ni,ns->nsi", A, dw)
    ddB = (
        ddA * iV[:, None, None, None]
        + np.einsum("nsi,nt->nsti", dA, dw)
        + np.einsum("nti,ns->nsti", dA, dw)
        + np.einsum("ni,nst->nsti", A, ddw)
    )
    G = P * iV[:, None, None]
    dG = dP * iV[:, None, None, None] + np.einsum("nij,ns->nsij", P, dw)
    ddG = (
        ddP * iV[:, None, None, None, None]
        + np.einsum("nsij,nt->nstij", dP, dw)
        + np.einsum("ntij,ns->nstij", dP, dw)
        + np.einsum("nij,nst->nstij", P, ddw)
    )
    g = np.zeros((n, 4, 4))
    g[:, :3, :3] = V[:, None, None] * _EYE3 + G
    g[:, :3, 3] = B
    g[:, 3, :3] = B
    g[:, 3, 3] = iV
    dg = np.zeros((n, 3, 4, 4))
    dg[:, :, :3, :3] = np.einsum("ns,ij->nsij", du, _EYE3) + dG
    dg[:, :, :3, 3] = dB
    dg[:, :, 3, :3] = dB
    dg[:, :, 3, 3] = dw
    ddg = np.zeros((n, 3, 3, 4, 4))
    ddg[:, :, :, :3, :3] = np.einsum("nst,ij->nstij", ddu, _EYE3) + ddG
    ddg[:, :, :, :3, 3] = ddB
    ddg[:, :, :, 3, :3] = ddB
    ddg[:, :, :, 3, 3] = ddw
    return g, dg, ddg


def model_metric_jets(A, dA, ddA):
    """Components and derivatives of the model metric h = dx^2 + eta^2."""
    n = A.shape[0]
    P = np.einsum("ni,nj->nij", A, A)
    dP = np.einsum("nsi,nj->nsij", dA, A) + np.einsum("ni,nsj->nsij", A, dA)
    ddP = (
        np.einsum("nsti,nj->nstij", ddA, A)
        + np.einsum("ni,nstj->nstij", A, ddA)
        + np.einsum("nsi,ntj->nstij", dA, dA)
        + np.einsum("nti,nsj->nstij", dA, dA)
    )
    h = np.zeros((n, 4, 4))
    h[:, :3, :3] = _EYE3[None, :, :] + P
    h[:, :3, 3] = A
    h[:, 3, :3] = A
    h[:, 3, 3] = 1.0
    dh = np.zeros((n, 3, 4, 4))
    dh[:, :, :3, :3] = dP
    dh[:, :, :3, 3] = dA
    dh[:, :, 3, :3] = dA
    ddh = np.zeros((n, 3, 3, 4, 4))
    ddh[:, :, :, :3, :3] = ddP
    ddh[:, :, :, :3, 3] = ddA
    ddh[:, :, :, 3, :3] = ddA
    return h, dh, ddh


def gh_inverse_metric(u, A):
    """Closed-form inverse of the Gibbons-Hawking metric."""
    n = u.shape[0]
    V = 1.0 + u
    iV = 1.0 / V
    gi = np.zeros((n, 4, 4))
    gi[:, :3, :3] = iV[:, None, None] * _EYE3
    gi[:, :3, 3] = -A * iV[:, None]
    gi[:, 3, :3] = gi[:, :3, 3]
    gi[:, 3, 3] = V + np.einsum("ni,ni->n", A, A) * iV
    return gi


def model_inverse_metric(A):
    """Closed-form inverse of the model metric h."""
    n = A.shape[0]
    hi = np.zeros((n, 4, 4))
    hi[:, :3, :3] = _EYE3
    hi[:, :3, 3] = -A
    hi[:, 3, :3] = -A
    hi[:, 3, 3] = 1.0 + np.einsum("ni,ni->n", A, A)
    return hi


def _sym_derivative_combination(D):
    # S[n, r, m, v] = D[n, m, v, r] + D[n, v, m, r] - D[n, r, m, v]
    return D.transpose(0, 3, 1, 2) + D.transpose(0, 3, 2, 1) - D


def christoffel(gi, dg):
    """Levi-Civita symbols Gamma^l_mv of any t-invariant metric."""
    n = gi.shape[0]
    D = np.zeros((n, 4, 4, 4))
    D[:, :3] = dg
    S = _sym_derivative_combination(D)
    return 0.5 * np.einsum("nlr,nrmv->nlmv", gi, S)


def curvature(g, gi, dg, ddg):
    """Full curvature data of a t-invariant metric from its 2-jet.

    Derivatives of Gamma come from applying the Christoffel formula to the
    jet-valued metric (the product rule on g^{-1} and the stored second
    derivatives), not from a third jet order.

    Returns (gamma, riem, ric, riem_norm2) with riem holding R^r_sab.
    """
    n = g.shape[0]
    D = np.zeros((n, 4, 4, 4))
    D[:, :3] = dg
    S = _sym_derivative_combination(D)
    gamma = 0.5 * np.einsum("nlr,nrmv->nlmv", gi, S)
    dgi = -np.einsum("nab,nsbc,ncd->nsad", gi, dg, gi)
    DD = np.zeros((n, 3, 4, 4, 4))
    DD[:, :, :3] = ddg
    dS = DD.transpose(0, 1, 4, 2, 3) + DD.transpose(0, 1, 4, 3, 2) - DD
    dgamma = 0.5 * (
        np.einsum("nslr,nrmv->nslmv", dgi, S) + np.einsum("nlr,nsrmv->nslmv", gi, dS)
    )
    dg4 = np.zeros((n, 4, 4, 4, 4))
    dg4[:, :3] = dgamma
    # term1[n, r, s, a, b] = d_a Gamma^r_bs
    term1 = dg4.transpose(0, 2, 4, 1, 3)
    quad = np.einsum("nrml,nlvs->nrsmv", gamma, gamma)
    riem = term1 - term1.transpose(0, 1, 2, 4, 3) + quad - quad.transpose(0, 1, 2, 4, 3)
    ric = np.einsum("nrsrv->nsv", riem)
    riem_low = np.einsum("nar,nrbcd->nabcd", g, riem)
    riem_up = np.einsum("nrbcd,nbf,ncg,ndh->nrfgh", riem, gi, gi, gi)
    riem_norm2 = np.einsum("nabcd,nabcd->n", riem_low, riem_up)
    return gamma, riem, ric, riem_norm2
