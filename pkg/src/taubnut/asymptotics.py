"""Measured decay and growth exponents of the constructed metrics.

Curvature decays cubically (sup-sphere |Riem| has log-log slope -3), the
metric approaches the model h = dx^2 + eta^2 at rate 1/R in the h-norm,
and the fiber length approaches L_inf at the same rate.  Near a NUT
center the curvature stays bounded: the chart degenerates but the metric
extends smoothly, so sup-sphere |Riem| plateaus on shrinking spheres.

Sups over spheres are approximated on a fixed 2000-node golden-spiral
set; the seed rotates the node set rigidly, so results are deterministic
per seed and the node count is an explicit accuracy knob.  Fit radii are
anchored well beyond the configuration scale: closer in, the subleading
near-field terms visibly bend the log-log line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .connection import connection_batch
from .errors import ConfigError, ScheduleError
from .geometry import curvature_batch
from .integrals import deviation_tensor_batch, fiber_length_batch
from . import backend

DEFAULT_SUP_SAMPLES = 2000
RIEM_DECAY_FACTORS = (32.0, 64.0, 128.0, 256.0, 512.0)
MODEL_DECAY_FACTORS = (16.0, 32.0, 64.0, 128.0, 256.0)

QUANTITIES = ("riem_norm", "metric_deviation", "fiber_defect")


@dataclass(frozen=True)
class DecaySample:
    radius: float
    value: float


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    residual: float       # max |log(value) - fit| over the samples
    radii_range: tuple


def fibonacci_sphere(n, seed=0):
    """n near-uniform unit directions: golden spiral, rigidly rotated by seed."""
    i = np.arange(int(n), dtype=np.float64)
    z = 1.0 - (2.0 * i + 1.0) / float(n)
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    dirs = np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(99,)))
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return dirs @ q.T


def metric_deviation_batch(config, xs, gauge=None):
    """|g - h|_h per point: the h-norm of the deviation tensor."""
    kern = backend.kernels()
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    e, _ = deviation_tensor_batch(config, xs, gauge)
    A, _, _ = connection_batch(config, gauge, xs)
    hi = kern.model_inverse_metric(A)
    norm2 = np.einsum("nma,nvb,nmv,nab->n", hi, hi, e, e)
    return np.sqrt(np.maximum(norm2, 0.0))


def fiber_defect_batch(config, xs):
    """|L(x)/L_inf - 1| per point."""
    return np.abs(fiber_length_batch(config, xs) / config.fiber_period - 1.0)


def sup_on_sphere(config, quantity, radius, samples=DEFAULT_SUP_SAMPLES, seed=0,
                  center=None, gauge=None):
    """Max of a decay quantity over a deterministic node set on a sphere."""
    if quantity not in QUANTITIES:
        raise ConfigError("unknown decay quantity %r; known: %s" % (quantity, ", ".join(QUANTITIES)))
    center = np.zeros(3) if center is None else np.asarray(center, dtype=np.float64)
    xs = center[None, :] + float(radius) * fibonacci_sphere(samples, seed)
    if quantity == "riem_norm":
        return float(curvature_batch(config, xs, gauge)["riem_norm"].max())
    if quantity == "metric_deviation":
        return float(metric_deviation_batch(config, xs, gauge).max())
    return float(fiber_defect_batch(config, xs).max())


def default_decay_radii(config, quantity):
    factors = RIEM_DECAY_FACTORS if quantity == "riem_norm" else MODEL_DECAY_FACTORS
    return tuple(f * config.scale for f in factors)


def decay_samples(config, quantity, radii=None, samples=DEFAULT_SUP_SAMPLES, seed=0, gauge=None):
    """Sup-sphere samples of a quantity along a radius schedule."""
    if radii is None:
        radii = default_decay_radii(config, quantity)
    out = []
    for r in radii:
        out.append(DecaySample(float(r), sup_on_sphere(config, quantity, r, samples, seed, None, gauge)))
    return out


def fit_exponent(samples):
    """Least-squares slope of log(value) against log(radius)."""
    if len(samples) < 4:
        raise ScheduleError("exponent fit needs at least 4 samples, got %d" % len(samples))
    radii = np.array([s.radius for s in samples])
    values = np.array([s.value for s in samples])
    if np.any(values <= 0.0):
        raise ScheduleError("exponent fit needs positive values; a sampled sup vanished")
    if np.any(np.diff(radii) <= 0.0):
        raise ScheduleError("exponent fit needs strictly increasing radii")
    if radii[-1] / radii[0] < 4.0:
        raise ScheduleError("exponent fit needs radii spanning at least two octaves")
    lr, lv = np.log(radii), np.log(values)
    slope, intercept = np.polyfit(lr, lv, 1)
    residual = float(np.abs(lv - (slope * lr + intercept)).max())
    return ExponentFit(float(slope), float(intercept), residual, (float(radii[0]), float(radii[-1])))


@dataclass(frozen=True)
class NutBoundednessReport:
    """Sup-sphere |Riem| on spheres shrinking toward one center."""

    center_index: int
    radii: tuple
    sups: tuple
    plateau: float          # the innermost sampled sup
    last_three_ratio: float

    @property
    def bounded(self):
        return self.last_three_ratio <= 2.0


def nut_boundedness(config, center_index, radii=None, samples=DEFAULT_SUP_SAMPLES, seed=0):
    """Monitor |Riem| on spheres shrinking toward a center (down to 10 eps)."""
    if not 0 <= center_index < config.k:
        raise ConfigError("center index %d out of range for k=%d" % (center_index, config.k))
    if radii is None:
        c = config.centers_array[center_index]
        if config.k > 1:
            others = np.delete(config.centers_array, center_index, axis=0)
            hi = 0.25 * float(np.linalg.norm(others - c[None, :], axis=1).min())
        else:
            hi = 0.25 * config.scale
        lo = 10.0 * config.exclusion_radius
        if lo >= hi:
            raise ScheduleError(
                "no room between 10 eps = %.3g and the near-field radius %.3g" % (lo, hi)
            )
        radii = tuple(np.geomspace(hi, lo, 8))
    radii = tuple(float(r) for r in radii)
    if any(r < 10.0 * config.exclusion_radius for r in radii):
        raise ScheduleError("boundedness radii must stay at or above 10 eps")
    center = config.centers_array[center_index]
    sups = tuple(
        sup_on_sphere(config, "riem_norm", r, samples, seed, center) for r in radii
    )
    last = sups[-3:]
    ratio = max(last) / min(last) if min(last) > 0 else math.inf
    return NutBoundednessReport(center_index, radii, sups, sups[-1], float(ratio))
