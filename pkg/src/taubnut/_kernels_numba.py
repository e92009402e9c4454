"""Jitted mirrors of the numpy kernels (same contracts, explicit loops).

See ``_kernels_numpy`` for the index conventions and closed forms; the
two modules expose identical signatures on float64 arrays and must stay
interchangeable.  Loops are written per point so the JIT fuses them
without large temporaries.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = dict(cache=True, fastmath=False, nogil=True)


@njit(**_JIT)
def potential_jets(centers, masses, xs):
    n = xs.shape[0]
    k = centers.shape[0]
    u = np.zeros(n)
    du = np.zeros((n, 3))
    ddu = np.zeros((n, 3, 3))
    for p in range(n):
        for i in range(k):
            d0 = xs[p, 0] - centers[i, 0]
            d1 = xs[p, 1] - centers[i, 1]
            d2 = xs[p, 2] - centers[i, 2]
            r2 = d0 * d0 + d1 * d1 + d2 * d2
            r = np.sqrt(r2)
            w = 2.0 * masses[i] / r
            u[p] += w
            c1 = -w / r2
            du[p, 0] += c1 * d0
            du[p, 1] += c1 * d1
            du[p, 2] += c1 * d2
            c2 = 3.0 * w / (r2 * r2)
            c3 = w / r2
            ddu[p, 0, 0] += c2 * d0 * d0 - c3
            ddu[p, 1, 1] += c2 * d1 * d1 - c3
            ddu[p, 2, 2] += c2 * d2 * d2 - c3
            ddu[p, 0, 1] += c2 * d0 * d1
            ddu[p, 0, 2] += c2 * d0 * d2
            ddu[p, 1, 2] += c2 * d1 * d2
    for p in range(n):
        ddu[p, 1, 0] = ddu[p, 0, 1]
        ddu[p, 2, 0] = ddu[p, 0, 2]
        ddu[p, 2, 1] = ddu[p, 1, 2]
    return u, du, ddu


@njit(**_JIT)
def resolve_charts(centers, prefs, xs):
    n = xs.shape[0]
    k = centers.shape[0]
    out = np.empty((n, k), dtype=np.int8)
    for p in range(n):
        for i in range(k):
            if prefs[i] != 0:
                out[p, i] = prefs[i]
            elif xs[p, 2] - centers[i, 2] >= 0.0:
                out[p, i] = 1
            else:
                out[p, i] = -1
    return out


@njit(**_JIT)
def monopole_jets(centers, strengths, charts, xs):
    n = xs.shape[0]
    k = centers.shape[0]
    A = np.zeros((n, 3))
    dA = np.zeros((n, 3, 3))
    ddA = np.zeros((n, 3, 3, 3))
    e3 = np.zeros(3)
    e3[2] = 1.0
    xi = np.zeros(3)
    P = np.zeros(3)
    dP = np.zeros((3, 3))
    dD = np.zeros(3)
    ddD = np.zeros((3, 3))
    for p in range(n):
        for i in range(k):
            for a in range(3):
                xi[a] = xs[p, a] - centers[i, a]
            r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
            r = np.sqrt(r2)
            s = float(charts[p, i])
            D = r2 + s * r * xi[2]
            P[0] = xi[1]
            P[1] = -xi[0]
            P[2] = 0.0
            for a in range(3):
                for b in range(3):
                    dP[a, b] = 0.0
            dP[1, 0] = 1.0
            dP[0, 1] = -1.0
            for a in range(3):
                dD[a] = 2.0 * xi[a] + s * xi[2] * xi[a] / r
            dD[2] += s * r
            ir = 1.0 / r
            ir3 = ir / r2
            for a in range(3):
                for b in range(3):
                    ddD[a, b] = s * (
                        xi[a] * ir * e3[b]
                        + e3[a] * xi[b] * ir
                        - xi[2] * ir3 * xi[a] * xi[b]
                    )
                ddD[a, a] += 2.0 + s * xi[2] * ir
            c = 2.0 * strengths[i] * s
            iD = 1.0 / D
            iD2 = iD * iD
            iD3 = iD2 * iD
            for a in range(3):
                A[p, a] += c * P[a] * iD
            for j in range(3):
                for a in range(3):
                    dA[p, j, a] += c * (dP[j, a] * iD - P[a] * dD[j] * iD2)
            for j in range(3):
                for l in range(3):
                    for a in range(3):
                        ddA[p, j, l, a] += c * (
                            -(dP[j, a] * dD[l] + dP[l, a] * dD[j] + P[a] * ddD[j, l]) * iD2
                            + 2.0 * P[a] * dD[j] * dD[l] * iD3
                        )
    return A, dA, ddA


@njit(**_JIT)
def gh_metric_jets(u, du, ddu, A, dA, ddA):
    n = u.shape[0]
    g = np.zeros((n, 4, 4))
    dg = np.zeros((n, 3, 4, 4))
    ddg = np.zeros((n, 3, 3, 4, 4))
    for p in range(n):
        V = 1.0 + u[p]
        iV = 1.0 / V
        iV2 = iV * iV
        iV3 = iV2 * iV
        # w = 1 / V and its jets
        dw = np.zeros(3)
        ddw = np.zeros((3, 3))
        for s in range(3):
            dw[s] = -du[p, s] * iV2
            for t in range(3):
                ddw[s, t] = -ddu[p, s, t] * iV2 + 2.0 * iV3 * du[p, s] * du[p, t]
        for i in range(3):
            for j in range(3):
                g[p, i, j] = A[p, i] * A[p, j] * iV
            g[p, i, i] += V
            g[p, i, 3] = A[p, i] * iV
            g[p, 3, i] = g[p, i, 3]
        g[p, 3, 3] = iV
        for s in range(3):
            for i in range(3):
                dB = dA[p, s, i] * iV + A[p, i] * dw[s]
                dg[p, s, i, 3] = dB
                dg[p, s, 3, i] = dB
                for j in range(3):
                    dg[p, s, i, j] = (
                        (dA[p, s, i] * A[p, j] + A[p, i] * dA[p, s, j]) * iV
                        + A[p, i] * A[p, j] * dw[s]
                    )
                dg[p, s, i, i] += du[p, s]
            dg[p, s, 3, 3] = dw[s]
        for s in range(3):
            for t in range(3):
                for i in range(3):
                    ddB = (
                        ddA[p, s, t, i] * iV
                        + dA[p, s, i] * dw[t]
                        + dA[p, t, i] * dw[s]
                        + A[p, i] * ddw[s, t]
                    )
                    ddg[p, s, t, i, 3] = ddB
                    ddg[p, s, t, 3, i] = ddB
                    for j in range(3):
                        dPij = dA[p, s, i] * A[p, j] + A[p, i] * dA[p, s, j]
                        dPij_t = dA[p, t, i] * A[p, j] + A[p, i] * dA[p, t, j]
                        ddPij = (
                            ddA[p, s, t, i] * A[p, j]
                            + A[p, i] * ddA[p, s, t, j]
                            + dA[p, s, i] * dA[p, t, j]
                            + dA[p, t, i] * dA[p, s, j]
                        )
                        ddg[p, s, t, i, j] = (
                            ddPij * iV
                            + dPij * dw[t]
                            + dPij_t * dw[s]
                            + A[p, i] * A[p, j] * ddw[s, t]
                        )
                    ddg[p, s, t, i, i] += ddu[p, s, t]
                ddg[p, s, t, 3, 3] = ddw[s, t]
    return g, dg, ddg


@njit(**_JIT)
def model_metric_jets(A, dA, ddA):
    n = A.shape[0]
    h = np.zeros((n, 4, 4))
    dh = np.zeros((n, 3, 4, 4))
    ddh = np.zeros((n, 3, 3, 4, 4))
    for p in range(n):
        for i in range(3):
            for j in range(3):
                h[p, i, j] = A[p, i] * A[p, j]
            h[p, i, i] += 1.0
            h[p, i, 3] = A[p, i]
            h[p, 3, i] = A[p, i]
        h[p, 3, 3] = 1.0
        for s in range(3):
            for i in range(3):
                dh[p, s, i, 3] = dA[p, s, i]
                dh[p, s, 3, i] = dA[p, s, i]
                for j in range(3):
                    dh[p, s, i, j] = dA[p, s, i] * A[p, j] + A[p, i] * dA[p, s, j]
        for s in range(3):
            for t in range(3):
                for i in range(3):
                    ddh[p, s, t, i, 3] = ddA[p, s, t, i]
                    ddh[p, s, t, 3, i] = ddA[p, s, t, i]
                    for j in range(3):
                        ddh[p, s, t, i, j] = (
                            ddA[p, s, t, i] * A[p, j]
                            + A[p, i] * ddA[p, s, t, j]
                            + dA[p, s, i] * dA[p, t, j]
                            + dA[p, t, i] * dA[p, s, j]
                        )
    return h, dh, ddh


@njit(**_JIT)
def gh_inverse_metric(u, A):
    n = u.shape[0]
    gi = np.zeros((n, 4, 4))
    for p in range(n):
        V = 1.0 + u[p]
        iV = 1.0 / V
        a2 = A[p, 0] * A[p, 0] + A[p, 1] * A[p, 1] + A[p, 2] * A[p, 2]
        for i in range(3):
            gi[p, i, i] = iV
            gi[p, i, 3] = -A[p, i] * iV
            gi[p, 3, i] = gi[p, i, 3]
        gi[p, 3, 3] = V + a2 * iV
    return gi


@njit(**_JIT)
def model_inverse_metric(A):
    n = A.shape[0]
    hi = np.zeros((n, 4, 4))
    for p in range(n):
        a2 = A[p, 0] * A[p, 0] + A[p, 1] * A[p, 1] + A[p, 2] * A[p, 2]
        for i in range(3):
            hi[p, i, i] = 1.0
            hi[p, i, 3] = -A[p, i]
            hi[p, 3, i] = -A[p, i]
        hi[p, 3, 3] = 1.0 + a2
    return hi


@njit(**_JIT)
def christoffel(gi, dg):
    n = gi.shape[0]
    gamma = np.zeros((n, 4, 4, 4))
    D = np.zeros((4, 4, 4))
    for p in range(n):
        for s in range(3):
            for a in range(4):
                for b in range(4):
                    D[s, a, b] = dg[p, s, a, b]
        for a in range(4):
            for b in range(4):
                D[3, a, b] = 0.0
        for l in range(4):
            for m in range(4):
                for v in range(4):
                    acc = 0.0
                    for r in range(4):
                        acc += gi[p, l, r] * (D[m, v, r] + D[v, m, r] - D[r, m, v])
                    gamma[p, l, m, v] = 0.5 * acc
    return gamma


@njit(**_JIT)
def curvature(g, gi, dg, ddg):
    n = g.shape[0]
    gamma = np.zeros((n, 4, 4, 4))
    riem = np.zeros((n, 4, 4, 4, 4))
    ric = np.zeros((n, 4, 4))
    riem_norm2 = np.zeros(n)
    D = np.zeros((4, 4, 4))
    dgi = np.zeros((3, 4, 4))
    dgamma = np.zeros((3, 4, 4, 4))
    low = np.zeros((4, 4, 4, 4))
    t1 = np.zeros((4, 4, 4, 4))
    t2 = np.zeros((4, 4, 4, 4))
    for p in range(n):
        for s in range(3):
            for a in range(4):
                for b in range(4):
                    D[s, a, b] = dg[p, s, a, b]
        for a in range(4):
            for b in range(4):
                D[3, a, b] = 0.0
        for l in range(4):
            for m in range(4):
                for v in range(4):
                    acc = 0.0
                    for r in range(4):
                        acc += gi[p, l, r] * (D[m, v, r] + D[v, m, r] - D[r, m, v])
                    gamma[p, l, m, v] = 0.5 * acc
        # d(g^{-1}) = -g^{-1} dg g^{-1}
        for s in range(3):
            for a in range(4):
                for d in range(4):
                    acc = 0.0
                    for b in range(4):
                        for c in range(4):
                            acc += gi[p, a, b] * dg[p, s, b, c] * gi[p, c, d]
                    dgi[s, a, d] = -acc
        # d Gamma via the product rule; second derivatives in the t slot vanish
        for s in range(3):
            for l in range(4):
                for m in range(4):
                    for v in range(4):
                        acc = 0.0
                        for r in range(4):
                            acc += dgi[s, l, r] * (D[m, v, r] + D[v, m, r] - D[r, m, v])
                            dS = 0.0
                            if m < 3:
                                dS += ddg[p, s, m, v, r]
                            if v < 3:
                                dS += ddg[p, s, v, m, r]
                            if r < 3:
                                dS -= ddg[p, s, r, m, v]
                            acc += gi[p, l, r] * dS
                        dgamma[s, l, m, v] = 0.5 * acc
        # R^r_sab = d_a Gamma^r_bs - d_b Gamma^r_as + quadratic terms
        for r in range(4):
            for s in range(4):
                for a in range(4):
                    for b in range(4):
                        acc = 0.0
                        if a < 3:
                            acc += dgamma[a, r, b, s]
                        if b < 3:
                            acc -= dgamma[b, r, a, s]
                        for l in range(4):
                            acc += gamma[p, r, a, l] * gamma[p, l, b, s]
                            acc -= gamma[p, r, b, l] * gamma[p, l, a, s]
                        riem[p, r, s, a, b] = acc
        for s in range(4):
            for v in range(4):
                acc = 0.0
                for r in range(4):
                    acc += riem[p, r, s, r, v]
                ric[p, s, v] = acc
        # |Riem|^2 by lowering the first index and raising the last three
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    for d in range(4):
                        acc = 0.0
                        for r in range(4):
                            acc += g[p, a, r] * riem[p, r, b, c, d]
                        low[a, b, c, d] = acc
        for r in range(4):
            for f in range(4):
                for c in range(4):
                    for d in range(4):
                        acc = 0.0
                        for b in range(4):
                            acc += riem[p, r, b, c, d] * gi[p, b, f]
                        t1[r, f, c, d] = acc
        for r in range(4):
            for f in range(4):
                for w in range(4):
                    for d in range(4):
                        acc = 0.0
                        for c in range(4):
                            acc += t1[r, f, c, d] * gi[p, c, w]
                        t2[r, f, w, d] = acc
        acc2 = 0.0
        for r in range(4):
            for f in range(4):
                for w in range(4):
                    for hh in range(4):
                        up = 0.0
                        for d in range(4):
                            up += t2[r, f, w, d] * gi[p, d, hh]
                        acc2 += low[r, f, w, hh] * up
        riem_norm2[p] = acc2
    return gamma, riem, ric, riem_norm2
