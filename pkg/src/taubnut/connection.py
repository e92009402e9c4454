"""Dirac monopole gauge charts and the connection one-form eta.

Each center carries the standard two-chart monopole potential.  In
spherical coordinates (r, theta, phi) relative to the center,

    A_N = 2m (cos(theta) - 1) dphi      (regular near theta = 0),
    A_S = 2m (cos(theta) + 1) dphi      (regular near theta = pi),

with Dirac strings on the -e3 and +e3 rays respectively, and curvature
dA = *d(2m/r) in either chart.  The total connection is eta = dt + sum_i
A^(i), normalized so eta(d_t) = 1; the fiber coordinate t has period
L_inf = 8 pi m, which makes the chart transition t -> t + 4 m phi_i
well defined (one loop shifts t by 8 pi m = 0 mod L_inf; equivalently the
bundle has Chern number -1 around each center).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ConfigError, StringProximityError
from .jets import Jet2, constant
from .potential import ensure_admissible

_CHART_TO_SIGN = {"N": 1, "S": -1, "auto": 0}
_SIGN_TO_CHART = {1: "N", -1: "S"}


@dataclass(frozen=True)
class GaugeChart:
    """Per-center chart assignment: 'N', 'S', or 'auto'.

    'auto' resolves per evaluation point to the hemisphere chart, N iff
    (x - a_i)_3 >= 0, which keeps every point at angular distance >= pi/2
    from the active string.  theta_guard is the minimum angular distance
    tolerated from a fixed chart's string ray.
    """

    charts: tuple
    theta_guard: float = 1e-6

    def __post_init__(self):
        charts = tuple(self.charts)
        for c in charts:
            if c not in _CHART_TO_SIGN:
                raise ConfigError("chart must be 'N', 'S', or 'auto', got %r" % (c,))
        object.__setattr__(self, "charts", charts)
        if not (0 < self.theta_guard < math.pi / 4):
            raise ConfigError("theta_guard must lie in (0, pi/4)")

    @classmethod
    def auto(cls, k, theta_guard=1e-6):
        return cls(("auto",) * k, theta_guard)

    def prefs_array(self):
        return np.array([_CHART_TO_SIGN[c] for c in self.charts], dtype=np.int8)

    def check_admissible(self, config, xs):
        """Raise StringProximityError if any point sits within theta_guard
        of a fixed chart's string ray (auto charts are always admissible)."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
        if len(self.charts) != config.k:
            raise ConfigError(
                "gauge has %d chart flags for %d centers" % (len(self.charts), config.k)
            )
        for i, c in enumerate(self.charts):
            sign = _CHART_TO_SIGN[c]
            if sign == 0:
                continue
            xi = xs - config.centers_array[i][None, :]
            r = np.linalg.norm(xi, axis=1)
            # angle from the string ray, which points along -sign * e3
            cos_from_string = -sign * xi[:, 2] / r
            angle = np.arccos(np.clip(cos_from_string, -1.0, 1.0))
            j = int(np.argmin(angle))
            if angle[j] < self.theta_guard:
                raise StringProximityError(i, c, float(angle[j]), self.theta_guard)
        return xs


def _default_gauge(config):
    return GaugeChart.auto(config.k)


@dataclass(frozen=True)
class OneForm4:
    """A one-form in the chart coframe (dx1, dx2, dx3, dt).

    Components are Jet2 in the base coordinates (fiber-invariant fields
    have no t-derivatives by construction).
    """

    c1: Jet2
    c2: Jet2
    c3: Jet2
    ct: Jet2

    @property
    def components(self):
        return (self.c1, self.c2, self.c3, self.ct)

    @property
    def values(self):
        return np.array([c.value for c in self.components])

    def spatial_jacobian(self):
        """J[j, i] = d_j (component i), spatial block."""
        return np.stack([c.gradient for c in (self.c1, self.c2, self.c3)], axis=1)


def connection_batch(config, gauge, xs):
    """(A, dA, ddA) of the total spatial potential at admissible points."""
    xs = ensure_admissible(config, xs)
    if gauge is None:
        gauge = _default_gauge(config)
    gauge.check_admissible(config, xs)
    kern = backend.kernels()
    charts = kern.resolve_charts(config.centers_array, gauge.prefs_array(), xs)
    return kern.monopole_jets(config.centers_array, config.strengths_array, charts, xs)


def dirac_potential(center, m, chart, x):
    """Single-center monopole potential as a OneForm4 with jet components."""
    if chart not in ("N", "S"):
        raise ConfigError("chart must be 'N' or 'S', got %r" % (chart,))
    x = np.asarray(x, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    sign = _CHART_TO_SIGN[chart]
    xi = x - center
    r = float(np.linalg.norm(xi))
    angle = math.acos(max(-1.0, min(1.0, -sign * xi[2] / r)))
    if angle < 1e-6:
        raise StringProximityError(0, chart, angle, 1e-6)
    kern = backend.kernels()
    charts = np.full((1, 1), sign, dtype=np.int8)
    A, dA, ddA = kern.monopole_jets(center[None, :], np.array([m]), charts, x[None, :])
    comps = [Jet2(float(A[0, i]), dA[0, :, i].copy(), ddA[0, :, :, i].copy()) for i in range(3)]
    return OneForm4(comps[0], comps[1], comps[2], constant(0.0))


def total_connection(config, gauge, x, t=0.0):
    """eta = dt + sum_i A^(i) at one point; eta(d_t) = 1 always.

    The fiber angle t is accepted for signature completeness; every
    component is fiber-invariant.
    """
    A, dA, ddA = connection_batch(config, gauge, np.asarray(x, dtype=np.float64)[None, :])
    comps = [Jet2(float(A[0, i]), dA[0, :, i].copy(), ddA[0, :, :, i].copy()) for i in range(3)]
    return OneForm4(comps[0], comps[1], comps[2], constant(1.0))


def curl_from_jets(dA):
    """(curl A)_c from the Jacobian batch dA[n, j, i] = d_j A_i."""
    return np.stack(
        [
            dA[:, 1, 2] - dA[:, 2, 1],
            dA[:, 2, 0] - dA[:, 0, 2],
            dA[:, 0, 1] - dA[:, 1, 0],
        ],
        axis=1,
    )


def curvature_residual_batch(config, gauge, xs):
    """Relative residual of d(eta) = *dV per point: |curl A - grad V| scaled."""
    xs = ensure_admissible(config, xs)
    kern = backend.kernels()
    _, du, _ = kern.potential_jets(config.centers_array, config.masses_array, xs)
    _, dA, _ = connection_batch(config, gauge, xs)
    diff = curl_from_jets(dA) - du
    num = np.abs(diff).max(axis=1) if xs.shape[0] else np.zeros(0)
    scale = 1.0 + np.abs(du).max(axis=1) if xs.shape[0] else 1.0
    return num / scale


def verify_curvature(config, gauge, x):
    """Max-norm residual of d(eta) - Omega at one point (relative)."""
    res = curvature_residual_batch(config, gauge, np.asarray(x, dtype=np.float64)[None, :])
    return float(res[0])


@dataclass(frozen=True)
class TransitionReport:
    """Consistency data for the two charts of one center."""

    center_index: int
    form_residual: float   # max |(A_S - A_N) - 4m dphi| over components
    loop_shift: float      # fiber shift after one phi-loop: 2 pi * 4m
    period: float          # L_inf = 8 pi m
    shift_defect: float    # distance of loop_shift from 0 modulo the period

    @property
    def consistent(self):
        return self.form_residual <= 1e-10 and self.shift_defect <= 1e-10 * self.period


def transition_consistency(config, center_index, x):
    """Check A_S - A_N = 4m dphi and the fiber-shift compatibility at x.

    The transition one-form 4m dphi integrates to 8 pi m around a loop,
    which is exactly the fiber period: the two charts glue to a circle
    bundle of Chern number -1 around the center.
    """
    if not 0 <= center_index < config.k:
        raise ConfigError("center index %d out of range for k=%d" % (center_index, config.k))
    x = np.asarray(x, dtype=np.float64)
    center = config.centers_array[center_index]
    m = config.strengths_array[center_index]
    a_n = dirac_potential(center, m, "N", x)
    a_s = dirac_potential(center, m, "S", x)
    xi = x - center
    rho2 = xi[0] ** 2 + xi[1] ** 2
    if rho2 == 0.0:
        raise StringProximityError(center_index, "N", 0.0, 1e-6)
    dphi = np.array([-xi[1] / rho2, xi[0] / rho2, 0.0, 0.0])
    diff = a_s.values - a_n.values - 4.0 * m * dphi
    loop_shift = 2.0 * math.pi * 4.0 * m
    period = config.fiber_period
    r = math.fmod(loop_shift, period)
    shift_defect = min(abs(r), abs(period - abs(r)))
    return TransitionReport(center_index, float(np.abs(diff).max()), loop_shift, period, shift_defect)
