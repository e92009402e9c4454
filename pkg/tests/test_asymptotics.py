import math

import numpy as np
import pytest

from taubnut.asymptotics import (
    DecaySample,
    MODEL_DECAY_FACTORS,
    RIEM_DECAY_FACTORS,
    decay_samples,
    default_decay_radii,
    fiber_defect_batch,
    fibonacci_sphere,
    fit_exponent,
    metric_deviation_batch,
    nut_boundedness,
    sup_on_sphere,
)
from taubnut.config import preset
from taubnut.errors import ConfigError, ScheduleError
from taubnut.potential import potential_batch
from taubnut.sampling import random_admissible_points


class TestFibonacciSphere:
    def test_unit_norm_and_determinism(self):
        a = fibonacci_sphere(500, seed=7)
        b = fibonacci_sphere(500, seed=7)
        assert np.array_equal(a, b)
        assert np.allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-14)

    def test_seed_rotates_rigidly(self):
        a = fibonacci_sphere(300, seed=1)
        b = fibonacci_sphere(300, seed=2)
        assert not np.array_equal(a, b)
        # a rigid rotation preserves pairwise inner products
        assert np.allclose(a @ a.T, b @ b.T, atol=1e-12)

    def test_near_uniform_coverage(self):
        dirs = fibonacci_sphere(2000, seed=0)
        assert np.abs(dirs.mean(axis=0)).max() < 1e-2


class TestDeviationQuantities:
    def test_metric_deviation_closed_form(self):
        # for one center: |g - h|_h = |u| sqrt(3 + 1/V^2)
        cfg = preset("taub-nut")
        pts = random_admissible_points(cfg, 50, np.random.default_rng(40))
        dev = metric_deviation_batch(cfg, pts)
        V = potential_batch(cfg, pts)[0]
        u = V - 1.0
        want = np.abs(u) * np.sqrt(3.0 + 1.0 / V**2)
        assert np.allclose(dev, want, rtol=1e-10)

    def test_fiber_defect(self):
        cfg = preset("taub-nut")
        x = np.array([[2.0 * cfg.m, 0.0, 0.0]])  # V = 2 there
        got = fiber_defect_batch(cfg, x)[0]
        assert got == pytest.approx(1.0 - 1.0 / math.sqrt(2.0), rel=1e-13)

    def test_unknown_quantity_rejected(self):
        with pytest.raises(ConfigError):
            sup_on_sphere(preset("taub-nut"), "torsion", 10.0)


class TestExponentFit:
    def test_exact_power_law(self):
        samples = [DecaySample(r, 5.0 * r**-3) for r in (8.0, 16.0, 32.0, 64.0)]
        fit = fit_exponent(samples)
        assert fit.slope == pytest.approx(-3.0, abs=1e-12)
        assert math.exp(fit.intercept) == pytest.approx(5.0, rel=1e-12)
        assert fit.residual < 1e-12
        assert fit.radii_range == (8.0, 64.0)

    def test_schedule_guards(self):
        good = [DecaySample(r, 1.0 / r) for r in (1.0, 2.0, 4.0, 8.0)]
        with pytest.raises(ScheduleError):
            fit_exponent(good[:3])  # too few samples
        bad_value = [DecaySample(r, 0.0) for r in (1.0, 2.0, 4.0, 8.0)]
        with pytest.raises(ScheduleError):
            fit_exponent(bad_value)
        bad_order = list(reversed(good))
        with pytest.raises(ScheduleError):
            fit_exponent(bad_order)
        narrow = [DecaySample(r, 1.0 / r) for r in (8.0, 9.0, 10.0, 11.0)]
        with pytest.raises(ScheduleError):
            fit_exponent(narrow)


class TestDecayRates:
    def test_riemann_cubic_decay(self):
        cfg = preset("taub-nut")
        fit = fit_exponent(decay_samples(cfg, "riem_norm"))
        assert abs(fit.slope + 3.0) < 0.05

    def test_metric_linear_decay(self):
        cfg = preset("taub-nut")
        fit = fit_exponent(decay_samples(cfg, "metric_deviation"))
        assert abs(fit.slope + 1.0) < 0.05

    def test_fiber_linear_decay(self):
        cfg = preset("taub-nut")
        fit = fit_exponent(decay_samples(cfg, "fiber_defect"))
        assert abs(fit.slope + 1.0) < 0.05

    def test_default_radii(self):
        cfg = preset("two-center")
        assert default_decay_radii(cfg, "riem_norm") == tuple(
            f * cfg.scale for f in RIEM_DECAY_FACTORS
        )
        assert default_decay_radii(cfg, "fiber_defect") == tuple(
            f * cfg.scale for f in MODEL_DECAY_FACTORS
        )

    def test_flat_sups_vanish(self):
        cfg = preset("flat")
        for q in ("riem_norm", "metric_deviation", "fiber_defect"):
            assert sup_on_sphere(cfg, q, 16.0) == 0.0


class TestNutBoundedness:
    def test_curvature_plateaus_at_center(self):
        cfg = preset("two-center")
        rep = nut_boundedness(cfg, 0)
        assert rep.bounded
        assert rep.last_three_ratio <= 1.5
        assert rep.plateau > 0.0
        assert len(rep.radii) == len(rep.sups) == 8
        # the far-field values differ from the plateau by orders of magnitude
        assert rep.sups[-1] > 0.1 * max(rep.sups)

    def test_bad_center_index(self):
        with pytest.raises(ConfigError):
            nut_boundedness(preset("taub-nut"), 3)

    def test_radii_below_exclusion_guard(self):
        cfg = preset("taub-nut")
        with pytest.raises(ScheduleError):
            nut_boundedness(cfg, 0, radii=(cfg.exclusion_radius,))
