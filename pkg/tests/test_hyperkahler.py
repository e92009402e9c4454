import numpy as np
import pytest

from taubnut.config import preset
from taubnut.geometry import ChartPoint
from taubnut.hyperkahler import (
    KahlerTriple,
    closedness_residual,
    closedness_residual_batch,
    hyperkahler_residuals_batch,
    kahler_form_components,
    kahler_forms,
    killing_data,
    killing_moment_check,
    quaternion_check,
    volume_form_residuals,
)
from taubnut.sampling import random_admissible_points

RESIDUAL_KEYS = (
    "closedness",
    "squares",
    "products",
    "compatibility",
    "isometry",
    "pullback",
    "moment",
    "coframe",
    "norm",
    "alpha_residual",
    "orthogonality",
    "volume_form",
)


@pytest.mark.parametrize("name", ["flat", "taub-nut", "two-center", "ak3"])
def test_all_residual_families_vanish(name):
    cfg = preset(name)
    if cfg.k == 0:
        pts = np.random.default_rng(23).normal(size=(100, 3))
    else:
        pts = random_admissible_points(cfg, 100, np.random.default_rng(23))
    res = hyperkahler_residuals_batch(cfg, pts)
    assert set(res) == set(RESIDUAL_KEYS)
    for key in RESIDUAL_KEYS:
        assert res[key].max() < 1e-12, key


def test_flat_kahler_forms_are_constant():
    # V = 1, A = 0: omega_c = dx_c ^ dt + dx_a ^ dx_b for cyclic (c, a, b)
    cfg = preset("flat")
    triple = kahler_forms(cfg, ChartPoint([0.3, -1.0, 0.7]))
    for c, a, b in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        want = np.zeros((4, 4))
        want[c, 3] = 1.0
        want[a, b] = 1.0
        want = want - want.T
        assert np.array_equal(triple.forms[c], want)
    # quaternion algebra on the endomorphisms
    I, J, K = triple.endos
    eye = np.eye(4)
    assert np.allclose(I @ I, -eye, atol=1e-15)
    assert np.allclose(I @ J, K, atol=1e-15)
    assert np.allclose(J @ K, I, atol=1e-15)


def test_pointwise_reports():
    cfg = preset("two-center")
    p = ChartPoint([0.9, 0.2, -0.5])
    q = quaternion_check(cfg, p)
    assert q.max_residual() < 1e-13
    km = killing_moment_check(cfg, p)
    assert km.lie_derivative == 0.0
    assert km.max_residual() < 1e-13
    # closedness at the same point
    assert closedness_residual(cfg, p).max() < 1e-13


def test_killing_data_closed_form():
    from taubnut.potential import eval_V

    cfg = preset("taub-nut")
    x = np.array([0.4, -0.8, 1.1])
    kd = killing_data(cfg, ChartPoint(x))
    assert np.array_equal(kd.W, [0.0, 0.0, 0.0, 1.0])
    V = eval_V(cfg, x).value
    assert kd.V_from_W == pytest.approx(V, rel=1e-14)
    assert kd.alpha[3] == pytest.approx(1.0 / V, rel=1e-14)


def test_volume_form_positive_orientation():
    # omega ^ omega = 2 V d^4x with V > 0: the coefficient itself is positive
    cfg = preset("ak3")
    pts = random_admissible_points(cfg, 50, np.random.default_rng(24))
    from taubnut.geometry import metric_jets_batch

    g, _, _, _ = metric_jets_batch(cfg, pts)
    V = 1.0 / g[:, 3, 3]
    A = g[:, 3, :3] * V[:, None]
    omega = kahler_form_components(V, A)
    coeff = 2.0 * (
        omega[:, :, 0, 1] * omega[:, :, 2, 3]
        - omega[:, :, 0, 2] * omega[:, :, 1, 3]
        + omega[:, :, 0, 3] * omega[:, :, 1, 2]
    )
    assert np.all(coeff > 0.0)
    assert np.allclose(coeff, 2.0 * V[:, None], rtol=1e-13)
    assert volume_form_residuals(g, omega).max() < 1e-14


def test_closedness_fails_for_perturbed_connection():
    # scaling the connection breaks d(eta) = *dV and hence d(omega) = 0
    cfg = preset("taub-nut").with_perturbed_connection(1.05)
    pts = random_admissible_points(cfg, 50, np.random.default_rng(25))
    res = closedness_residual_batch(cfg, pts)
    assert res.max() > 1e-3


def test_triple_properties():
    cfg = preset("taub-nut")
    triple = kahler_forms(cfg, ChartPoint([1.0, 0.5, 0.25]))
    assert isinstance(triple, KahlerTriple)
    assert triple.forms[0] is triple.omega_I and triple.forms[2] is triple.omega_K
    assert triple.endos[0] is triple.I and triple.endos[2] is triple.K
    for w in triple.forms:
        assert np.array_equal(w, -w.T)
