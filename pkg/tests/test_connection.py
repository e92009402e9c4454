import math

import numpy as np
import pytest

from taubnut.config import preset
from taubnut.connection import (
    GaugeChart,
    connection_batch,
    curvature_residual_batch,
    dirac_potential,
    curl_from_jets,
    total_connection,
    transition_consistency,
    verify_curvature,
)
from taubnut.errors import StringProximityError
from taubnut.potential import potential_batch
from taubnut.sampling import random_admissible_points


@pytest.mark.parametrize("name", ["taub-nut", "two-center", "ak3"])
def test_curl_equals_grad_V(name):
    cfg = preset(name)
    pts = random_admissible_points(cfg, 200, np.random.default_rng(5))
    res = curvature_residual_batch(cfg, None, pts)
    assert res.max() < 1e-9
    assert verify_curvature(cfg, None, pts[0]) < 1e-9


def test_connection_jets_match_finite_differences():
    cfg = preset("two-center")
    gauge = GaugeChart(("N", "N"))
    pts = random_admissible_points(cfg, 15, np.random.default_rng(6), polar_guard=0.3)
    A, dA, ddA = connection_batch(cfg, gauge, pts)
    step = 1e-5
    for n, x in enumerate(pts):
        for j in range(3):
            e = np.zeros(3)
            e[j] = step
            Ap = connection_batch(cfg, gauge, (x + e)[None, :])[0][0]
            Am = connection_batch(cfg, gauge, (x - e)[None, :])[0][0]
            fd = (Ap - Am) / (2.0 * step)
            assert np.allclose(dA[n, j], fd, rtol=1e-5, atol=1e-7)
    # second derivatives are symmetric in the two derivative slots
    assert np.allclose(ddA, ddA.transpose(0, 2, 1, 3), atol=1e-12)


def test_dirac_monopole_closed_form():
    # chart N: A = 2m (cos(theta) - 1) dphi around the center
    m = 0.5
    center = np.zeros(3)
    x = np.array([0.3, 0.4, 0.7])
    r = np.linalg.norm(x)
    theta = math.acos(x[2] / r)
    rho2 = x[0] ** 2 + x[1] ** 2
    dphi = np.array([-x[1] / rho2, x[0] / rho2, 0.0])
    want = 2.0 * m * (math.cos(theta) - 1.0) * dphi
    form = dirac_potential(center, m, "N", x)
    got = np.array([c.value for c in form.components[:3]])
    assert np.allclose(got, want, rtol=1e-12, atol=1e-14)
    # chart S differs by the gauge shift 4 m dphi
    form_s = dirac_potential(center, m, "S", x)
    got_s = np.array([c.value for c in form_s.components[:3]])
    assert np.allclose(got_s - got, 4.0 * m * dphi, rtol=1e-12, atol=1e-14)


def test_eta_has_unit_dt_component():
    cfg = preset("taub-nut")
    form = total_connection(cfg, None, np.array([1.0, 0.5, -0.3]))
    assert form.components[3].value == 1.0


def test_auto_chart_follows_hemisphere():
    cfg = preset("taub-nut")
    up = np.array([[0.1, 0.0, 2.0]])
    down = np.array([[0.1, 0.0, -2.0]])
    from taubnut import backend

    kern = backend.kernels()
    prefs = GaugeChart.auto(1).prefs_array()
    assert kern.resolve_charts(cfg.centers_array, prefs, up)[0, 0] == 1
    assert kern.resolve_charts(cfg.centers_array, prefs, down)[0, 0] == -1


def test_string_proximity_error():
    cfg = preset("taub-nut")
    gauge = GaugeChart(("N",))
    on_string = np.array([[0.0, 0.0, -1.0]])  # chart N string is the -e3 ray
    with pytest.raises(StringProximityError) as err:
        connection_batch(cfg, gauge, on_string)
    assert err.value.suggested_chart == "S"
    # the S chart is fine there
    connection_batch(cfg, GaugeChart(("S",)), on_string)
    # auto gauge never trips the guard
    connection_batch(cfg, None, on_string)


def test_transition_consistency():
    cfg = preset("two-center")
    rng = np.random.default_rng(8)
    for i in range(cfg.k):
        for _ in range(5):
            x = cfg.centers_array[i] + rng.normal(size=3)
            rel = x - cfg.centers_array[i]
            if abs(rel[2]) / np.linalg.norm(rel) > 0.9:
                continue
            rep = transition_consistency(cfg, i, x)
            assert rep.consistent
            assert rep.form_residual < 1e-12
            # the loop shift 4 m (2 pi) is half the period, nonzero mod L
            assert rep.loop_shift == pytest.approx(8.0 * math.pi * cfg.m)
            assert rep.shift_defect < 1e-12 * rep.period


def test_curl_from_jets_on_linear_field():
    # A = (x2, 2 x3, 3 x1) has curl (-2, -3, -1); build jets directly
    dA = np.zeros((1, 3, 3))
    dA[0, 1, 0] = 1.0
    dA[0, 2, 1] = 2.0
    dA[0, 0, 2] = 3.0
    assert np.allclose(curl_from_jets(dA)[0], [-2.0, -3.0, -1.0])


def test_flat_connection_vanishes():
    cfg = preset("flat")
    xs = np.random.default_rng(9).normal(size=(6, 3))
    A, dA, ddA = connection_batch(cfg, None, xs)
    assert np.array_equal(A, np.zeros((6, 3)))
    assert np.array_equal(dA, np.zeros((6, 3, 3)))
    V, dV, _ = potential_batch(cfg, xs)
    assert np.array_equal(curl_from_jets(dA), dV)
