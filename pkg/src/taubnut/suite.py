"""The verification suite: every claimed identity as a named check.

Each check reduces to a single scalar (a residual or a relative
deviation) compared against a tolerance.  Randomness is drawn from a
generator seeded by (seed, registry position), so results do not depend
on worker count or execution order, and a subset run reproduces the
exact values of a full run.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import asymptotics, integrals, potential
from .config import InstantonConfig
from .connection import GaugeChart, curvature_residual_batch, transition_consistency
from .errors import ConfigError
from .geometry import (
    coordinate_laplacian_batch,
    curvature_batch,
    metric_compatibility_residual,
    metric_jets_batch,
    ricci_residual_batch,
    riemann_symmetry_residuals,
)
from .hyperkahler import hyperkahler_residuals_batch
from .report import DEFAULT_SEED, CheckResult, VerificationReport
from .sampling import random_admissible_points

DEFAULT_KNOBS = {
    "points": 500,
    "coordinate_points": 200,
    "sphere_nodes": 2000,
    "n_theta": 64,
    "n_phi": 128,
    "transition_points": 8,
    "gauge_points": 100,
}


def _points(config, rng, n, guard=0.0):
    return random_admissible_points(config, n, rng, polar_guard=guard)


def _sub_seed(rng):
    # a plain int seed for helpers that rotate fixed node sets
    return int(rng.integers(0, 2**31 - 1))


# ---- pointwise identity checks ----------------------------------------


def _chk_harmonic_potential(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    value = float(potential.harmonic_residual_batch(config, pts).max())
    return value, len(pts), "max scaled |lap V| over random admissible points"


def _chk_connection_curvature(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    value = float(curvature_residual_batch(config, None, pts).max())
    return value, len(pts), "max scaled |curl A - grad V| (d eta = *dV)"


def _chk_transition(config, rng, knobs):
    if config.k == 0:
        return 0.0, 0, "no centers, nothing to glue"
    worst = 0.0
    count = 0
    for i in range(config.k):
        c = config.centers_array[i]
        got = 0
        while got < knobs["transition_points"]:
            x = c + config.scale * rng.uniform(0.3, 1.5) * _unit(rng)
            rel = x - c
            if abs(rel[2]) / np.linalg.norm(rel) > 0.9:
                continue
            rep = transition_consistency(config, i, x)
            worst = max(worst, rep.form_residual, rep.shift_defect / rep.period)
            got += 1
            count += 1
    return float(worst), count, "chart difference is 4m dphi; loop shift is 4 pi (2m) mod L"


def _unit(rng):
    v = rng.normal(size=3)
    n = np.linalg.norm(v)
    while n < 1e-12:
        v = rng.normal(size=3)
        n = np.linalg.norm(v)
    return v / n


def _chk_closedness(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    res = hyperkahler_residuals_batch(config, pts)
    value = float(np.asarray(res["closedness"]).max())
    return value, len(pts), "max scaled |d omega_c| over the triple"


def _chk_quaternion(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    res = hyperkahler_residuals_batch(config, pts)
    value = float(max(np.asarray(res[k]).max()
                      for k in ("squares", "products", "compatibility", "isometry", "pullback")))
    return value, len(pts), "I^2 = J^2 = K^2 = -1, IJ = K, and metric compatibility"


def _chk_killing_moment(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    res = hyperkahler_residuals_batch(config, pts)
    value = float(max(np.asarray(res["moment"]).max(), np.asarray(res["coframe"]).max()))
    return value, len(pts), "contraction of d/dt with omega_c is -dx_c"


def _chk_killing_norm(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    res = hyperkahler_residuals_batch(config, pts)
    value = float(max(np.asarray(res["norm"]).max(), np.asarray(res["alpha_residual"]).max()))
    return value, len(pts), "|d/dt|^-2 = V and dual 1-form alpha = (dt + A)/V"


def _chk_coframe(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    res = hyperkahler_residuals_batch(config, pts)
    value = float(np.asarray(res["orthogonality"]).max())
    return value, len(pts), "(dx_i, alpha) is orthogonal with common norm 1/sqrt(V)"


def _chk_volume_form(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    res = hyperkahler_residuals_batch(config, pts)
    value = float(np.asarray(res["volume_form"]).max())
    return value, len(pts), "omega_c ^ omega_c = 2 V dx123t = 2 dvol_g"


def _chk_metric_det(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    frames = curvature_batch(config, pts)
    V = potential.potential_batch(config, pts)[0]
    det = np.linalg.det(frames["g"])
    value = float(np.abs(det - V * V).max() / (1.0 + float((V * V).max())))
    return value, len(pts), "det g = V^2 in the chart"


def _chk_metric_inverse(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    g, _, _, gi = metric_jets_batch(config, pts)
    lu = np.linalg.inv(g)
    v1 = float(np.abs(gi - lu).max() / (1.0 + float(np.abs(lu).max())))
    ident = np.einsum("nab,nbc->nac", g, gi) - np.eye(4)[None]
    v2 = float(np.abs(ident).max())
    return max(v1, v2), len(pts), "closed-form inverse agrees with LU solve"


def _chk_compatibility(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    value = float(metric_compatibility_residual(config, pts).max())
    return value, len(pts), "nabla g = 0 for the Levi-Civita symbols"


def _chk_ricci(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    value = float(ricci_residual_batch(config, pts).max())
    return value, len(pts), "max |Ric| / (1 + |Riem|)"


def _chk_riem_symmetries(config, rng, knobs):
    pts = _points(config, rng, knobs["points"])
    frames = curvature_batch(config, pts)
    parts = riemann_symmetry_residuals(frames["riem"], frames["g"], frames["g_inv"])
    value = float(max(p.max() for p in parts))
    return value, len(pts), "antisymmetries, pair symmetry, first Bianchi"


def _chk_harmonic_coords(config, rng, knobs):
    pts = _points(config, rng, knobs["coordinate_points"])
    lap = coordinate_laplacian_batch(config, pts)
    return float(np.abs(lap).max()), len(pts), "lap_g x_k = 0 for the three base coordinates"


# ---- integral checks ---------------------------------------------------


def _chk_flux_quantization(config, rng, knobs):
    nt, np_ = knobs["n_theta"], knobs["n_phi"]
    samples = nt * np_
    if config.k == 0:
        value = abs(integrals.flux(config, None, 3.0 * config.scale, None, nt, np_))
        return value, samples, "no centers: flux vanishes"
    devs = []
    parts = []
    for i in range(config.k):
        c = integrals.chern(config, config.centers_array[i],
                            integrals.small_sphere_radius(config, i), None, nt, np_)
        devs.append(abs(c + 1.0))
        parts.append("c[%d]=%.6f" % (i, c))
    cL = integrals.chern(config, None, integrals.large_sphere_radius(config), None, nt, np_)
    devs.append(abs(cL + config.k))
    parts.append("c[total]=%.6f" % cL)
    # a sphere enclosing no center sees zero flux
    off = config.centroid + np.array([config.farthest_center_norm() + 2.0 * config.scale, 0.0, 0.0])
    devs.append(abs(integrals.chern(config, off, 0.5 * config.scale, None, nt, np_)))
    return float(max(devs)), samples * (config.k + 2), "; ".join(parts)


def _chk_flux_additivity(config, rng, knobs):
    nt, np_ = knobs["n_theta"], knobs["n_phi"]
    if config.k == 0:
        return 0.0, 0, "no centers"
    fL = integrals.flux(config, None, integrals.large_sphere_radius(config), None, nt, np_)
    fs = sum(integrals.flux(config, config.centers_array[i],
                            integrals.small_sphere_radius(config, i), None, nt, np_)
             for i in range(config.k))
    value = abs(fL - fs) / (1.0 + abs(fL))
    return float(value), nt * np_ * (config.k + 1), "total flux equals the sum over centers"


def _mass_result(config, knobs):
    radii = knobs.get("mass_radii")
    return integrals.mass(config, radii=radii,
                          n_theta=knobs["n_theta"], n_phi=knobs["n_phi"])


def _chk_mass(config, rng, knobs):
    res = _mass_result(config, knobs)
    target = float(np.sum(config.masses_array)) if config.k else 0.0
    if config.k == 0:
        value = abs(res.limit)
    else:
        value = abs(res.limit - target) / target
    detail = "estimates %s -> limit %.8f (target %.8f)" % (
        ", ".join("%.6f" % e for e in res.estimates), res.limit, target)
    return float(value), len(res.radii) * knobs["n_theta"] * knobs["n_phi"], detail


def _chk_mass_chern(config, rng, knobs):
    res = _mass_result(config, knobs)
    lhs = -8.0 * np.pi * res.limit
    if config.k == 0:
        rhs = 0.0
    else:
        rhs = config.fiber_period * integrals.chern(
            config, None, integrals.large_sphere_radius(config),
            None, knobs["n_theta"], knobs["n_phi"])
    value = abs(lhs - rhs) / max(abs(rhs), 1.0)
    return float(value), knobs["n_theta"] * knobs["n_phi"], (
        "-8 pi mass = %.8f vs L * c1 = %.8f" % (lhs, rhs))


def _chk_fiber_limit(config, rng, knobs):
    x = config.centroid + np.array([1e4 * config.scale, 0.0, 0.0])
    L = integrals.fiber_length(config, x)
    value = abs(L / config.fiber_period - 1.0)
    return float(value), 1, "fiber length at r = 1e4 scale vs L = 8 pi m"


def _chk_volume_growth(config, rng, knobs):
    total_mass = float(np.sum(config.masses_array)) if config.k else 0.0
    R = max(64.0 * config.scale, 300.0 * total_mass)
    want = 4.0 * np.pi / 3.0 * config.fiber_period
    ratio = integrals.tube_volume_cubic_ratio(config, R,
                                              n_theta=knobs["n_theta"], n_phi=knobs["n_phi"])
    dbl = integrals.tube_volume_doubling_ratio(config, R,
                                               n_theta=knobs["n_theta"], n_phi=knobs["n_phi"])
    value = max(abs(ratio / want - 1.0), abs(dbl / 8.0 - 1.0))
    detail = "vol/R^3 = %.4f (target %.4f), vol(2R)/vol(R) = %.4f at R = %.0f" % (
        ratio, want, dbl, R)
    return float(value), 3 * knobs["n_theta"] * knobs["n_phi"], detail


# ---- asymptotic checks ---------------------------------------------------


def _decay_check(config, rng, knobs, quantity, expected_slope):
    nodes = knobs["sphere_nodes"]
    seed = _sub_seed(rng)
    if config.k == 0:
        radii = (16.0 * config.scale, 64.0 * config.scale)
        value = max(asymptotics.sup_on_sphere(config, quantity, r, nodes, seed)
                    for r in radii)
        return float(value), nodes * len(radii), "flat space: quantity vanishes identically"
    samples = asymptotics.decay_samples(config, quantity, None, nodes, seed)
    fit = asymptotics.fit_exponent(samples)
    value = abs(fit.slope - expected_slope)
    detail = "slope %.4f over radii %.0f..%.0f (expected %.0f)" % (
        fit.slope, fit.radii_range[0], fit.radii_range[1], expected_slope)
    return float(value), nodes * len(samples), detail


def _chk_riem_decay(config, rng, knobs):
    return _decay_check(config, rng, knobs, "riem_norm", -3.0)


def _chk_metric_decay(config, rng, knobs):
    return _decay_check(config, rng, knobs, "metric_deviation", -1.0)


def _chk_fiber_decay(config, rng, knobs):
    return _decay_check(config, rng, knobs, "fiber_defect", -1.0)


def _chk_nut_boundedness(config, rng, knobs):
    if config.k == 0:
        return 1.0, 0, "no centers"
    seed = _sub_seed(rng)
    nodes = knobs["sphere_nodes"]
    worst = 1.0
    parts = []
    for i in range(config.k):
        rep = asymptotics.nut_boundedness(config, i, None, nodes, seed)
        worst = max(worst, rep.last_three_ratio)
        parts.append("sup[%d] -> %.3f" % (i, rep.plateau))
    return float(worst), nodes * 8 * config.k, "; ".join(parts)


def _chk_gauge_invariance(config, rng, knobs):
    if config.k == 0:
        return 0.0, 0, "no connection, gauge choice is trivial"
    n = knobs["gauge_points"]
    pts = _points(config, rng, n, guard=0.25)
    gN = GaugeChart(("N",) * config.k)
    gS = GaugeChart(("S",) * config.k)
    devs = []
    curN = curvature_batch(config, pts, gN)
    curS = curvature_batch(config, pts, gS)
    scale_r = 1.0 + float(curN["riem_norm"].max())
    devs.append(float(np.abs(curN["riem_norm"] - curS["riem_norm"]).max()) / scale_r)
    ricN = np.abs(curN["ric"]).max(axis=(1, 2)) / (1.0 + curN["riem_norm"])
    ricS = np.abs(curS["ric"]).max(axis=(1, 2)) / (1.0 + curS["riem_norm"])
    devs.append(float(np.abs(ricN - ricS).max()))
    nt, np_ = knobs["n_theta"], knobs["n_phi"]
    for i in range(config.k):
        c, r = config.centers_array[i], integrals.small_sphere_radius(config, i)
        fN = integrals.flux(config, c, r, gN, nt, np_)
        fS = integrals.flux(config, c, r, gS, nt, np_)
        devs.append(abs(fN - fS) / (1.0 + abs(fN)))
    R = integrals.large_sphere_radius(config)
    fN = integrals.flux(config, None, R, gN, nt, np_)
    fS = integrals.flux(config, None, R, gS, nt, np_)
    devs.append(abs(fN - fS) / (1.0 + abs(fN)))
    r8 = 8.0 * config.scale
    mN = integrals._mass_estimate(config, r8, gN, nt, np_)
    mS = integrals._mass_estimate(config, r8, gS, nt, np_)
    devs.append(abs(mN - mS) / (1.0 + abs(mN)))
    detail = "N vs S charts: curvature, Ricci, fluxes, boundary mass"
    return float(max(devs)), n + (config.k + 1 + 1) * nt * np_, detail


# ---- registry -------------------------------------------------------------


@dataclass(frozen=True)
class CheckDef:
    name: str
    fn: object
    tol: object  # callable config -> float


def _const(x):
    return lambda config: x


def _tol_mass(config):
    return 0.01 if config.k else 1e-9


def _tol_decay(config):
    return 0.05 if config.k else 1e-12


REGISTRY = (
    CheckDef("harmonic-potential", _chk_harmonic_potential, _const(1e-10)),
    CheckDef("connection-curvature", _chk_connection_curvature, _const(1e-9)),
    CheckDef("transition-consistency", _chk_transition, _const(1e-10)),
    CheckDef("kahler-closedness", _chk_closedness, _const(1e-9)),
    CheckDef("quaternion-algebra", _chk_quaternion, _const(1e-10)),
    CheckDef("killing-moment", _chk_killing_moment, _const(1e-12)),
    CheckDef("killing-norm", _chk_killing_norm, _const(1e-12)),
    CheckDef("coframe-orthogonality", _chk_coframe, _const(1e-10)),
    CheckDef("volume-form", _chk_volume_form, _const(1e-10)),
    CheckDef("metric-determinant", _chk_metric_det, _const(1e-12)),
    CheckDef("metric-inverse", _chk_metric_inverse, _const(1e-12)),
    CheckDef("metric-compatibility", _chk_compatibility, _const(1e-10)),
    CheckDef("ricci-flat", _chk_ricci, _const(1e-8)),
    CheckDef("riemann-symmetries", _chk_riem_symmetries, _const(1e-9)),
    CheckDef("harmonic-coordinates", _chk_harmonic_coords, _const(1e-9)),
    CheckDef("flux-quantization", _chk_flux_quantization, _const(1e-8)),
    CheckDef("flux-additivity", _chk_flux_additivity, _const(1e-9)),
    CheckDef("mass-convergence", _chk_mass, _tol_mass),
    CheckDef("mass-chern-identity", _chk_mass_chern, _tol_mass),
    CheckDef("fiber-length-limit", _chk_fiber_limit, _const(1e-3)),
    CheckDef("volume-growth", _chk_volume_growth, _const(0.02)),
    CheckDef("riem-decay", _chk_riem_decay, _tol_decay),
    CheckDef("metric-decay", _chk_metric_decay, _tol_decay),
    CheckDef("fiber-decay", _chk_fiber_decay, _tol_decay),
    CheckDef("nut-boundedness", _chk_nut_boundedness, _const(2.0)),
    CheckDef("gauge-invariance", _chk_gauge_invariance, _const(1e-9)),
)

CHECK_NAMES = tuple(d.name for d in REGISTRY)


def _select(checks):
    if checks is None:
        return tuple(range(len(REGISTRY)))
    wanted = list(checks)
    known = {d.name: i for i, d in enumerate(REGISTRY)}
    bad = [w for w in wanted if w not in known]
    if bad:
        raise ConfigError("unknown checks: %s (known: %s)" % (
            ", ".join(bad), ", ".join(CHECK_NAMES)))
    return tuple(sorted({known[w] for w in wanted}))


def make_manifest(config, seed=DEFAULT_SEED, tol_scale=1.0, checks=None,
                  mass_radii=None, knobs=None):
    """The inputs that determine every number in a verification report."""
    if not isinstance(config, InstantonConfig):
        raise ConfigError("expected an InstantonConfig")
    idx = _select(checks)
    resolved = dict(DEFAULT_KNOBS)
    if knobs:
        unknown = set(knobs) - set(DEFAULT_KNOBS)
        if unknown:
            raise ConfigError("unknown sample knobs: %s" % ", ".join(sorted(unknown)))
        resolved.update({k: int(v) for k, v in knobs.items()})
    if mass_radii is not None:
        mass_radii = [float(r) for r in mass_radii]
    return {
        "schema_version": 1,
        "config": config.to_dict(),
        "seed": int(seed),
        "tol_scale": float(tol_scale),
        "suite": [REGISTRY[i].name for i in idx],
        "tolerances": {
            REGISTRY[i].name: REGISTRY[i].tol(config) * float(tol_scale) for i in idx
        },
        "samples": resolved,
        "mass_radii": mass_radii,
    }


def _run_one(config, idx, seed, tol, knobs):
    d = REGISTRY[idx]
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(idx,)))
    t0 = time.perf_counter()
    value, samples, detail = d.fn(config, rng, knobs)
    dt = time.perf_counter() - t0
    return CheckResult(d.name, float(value), float(tol), bool(value <= tol),
                       int(samples), detail, dt)


def run_suite(config, seed=DEFAULT_SEED, tol_scale=1.0, workers=1, checks=None,
              mass_radii=None, knobs=None):
    """Run the verification suite and return a VerificationReport."""
    manifest = make_manifest(config, seed, tol_scale, checks, mass_radii, knobs)
    idx = _select(checks)
    run_knobs = dict(manifest["samples"])
    run_knobs["mass_radii"] = manifest["mass_radii"]
    tols = manifest["tolerances"]
    workers = max(1, int(workers))
    if workers == 1:
        results = [_run_one(config, i, manifest["seed"], tols[REGISTRY[i].name], run_knobs)
                   for i in idx]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, config, i, manifest["seed"],
                                   tols[REGISTRY[i].name], run_knobs)
                       for i in idx]
            results = [f.result() for f in futures]
    return VerificationReport(manifest, tuple(results))
