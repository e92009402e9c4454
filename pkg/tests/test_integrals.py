import math

import numpy as np
import pytest

from taubnut.config import preset
from taubnut.errors import QuadratureNodeError, ScheduleError
from taubnut.geometry import metric_jets_batch, model_metric_batch
from taubnut.integrals import (
    MASS_RADIUS_FACTORS,
    ball_inverse_distance_integral,
    ball_one_integral,
    chern,
    default_mass_radii,
    deviation_tensor_batch,
    extrapolate_in_inverse_radius,
    fiber_length,
    fiber_length_batch,
    flux,
    large_sphere_radius,
    mass,
    small_sphere_radius,
    tube_volume,
    tube_volume_cubic_ratio,
    tube_volume_doubling_ratio,
)
from taubnut.sampling import random_admissible_points


def _exact_single_center_mass(m, radius):
    # boundary integral at finite R for one center at the origin:
    # m(R) = 4m/3 - m / (3 V(R)^2) with V(R) = 1 + 2m/R
    V = 1.0 + 2.0 * m / radius
    return 4.0 * m / 3.0 - m / (3.0 * V * V)


class TestFlux:
    def test_chern_counts_enclosed_centers(self):
        for name in ("taub-nut", "two-center", "ak3"):
            cfg = preset(name)
            big = chern(cfg, None, large_sphere_radius(cfg))
            assert big == pytest.approx(-cfg.k, abs=1e-10)
            for i in range(cfg.k):
                small = chern(cfg, cfg.centers_array[i], small_sphere_radius(cfg, i))
                assert small == pytest.approx(-1.0, abs=1e-10)

    def test_flux_additivity(self):
        cfg = preset("ak3")
        total = flux(cfg, None, large_sphere_radius(cfg))
        parts = sum(
            flux(cfg, cfg.centers_array[i], small_sphere_radius(cfg, i))
            for i in range(cfg.k)
        )
        assert abs(total - parts) < 1e-9 * (1.0 + abs(total))

    def test_empty_sphere_has_zero_flux(self):
        cfg = preset("two-center")
        center = np.array([cfg.farthest_center_norm() + 2.0 * cfg.scale, 0.0, 0.0])
        assert abs(flux(cfg, center, 0.5 * cfg.scale)) < 1e-10

    def test_flat_flux_is_zero(self):
        cfg = preset("flat")
        assert flux(cfg, None, 3.0) == 0.0
        assert chern(cfg, [1.0, 2.0, 0.5], 1.0) == 0.0

    def test_perturbed_connection_breaks_quantization(self):
        cfg = preset("taub-nut").with_perturbed_connection(1.05)
        c = chern(cfg, None, large_sphere_radius(cfg))
        assert c == pytest.approx(-1.05, abs=1e-10)

    def test_unequal_masses_give_fractional_chern(self):
        cfg = preset("two-center").with_unequal_masses()
        values = [
            chern(cfg, cfg.centers_array[i], small_sphere_radius(cfg, i))
            for i in range(cfg.k)
        ]
        assert values[0] == pytest.approx(-1.0, abs=1e-10)
        assert values[1] == pytest.approx(-1.5, abs=1e-10)

    def test_sphere_through_exclusion_ball_rejected(self):
        cfg = preset("taub-nut")
        with pytest.raises(QuadratureNodeError):
            flux(cfg, cfg.centers_array[0], 0.5 * cfg.exclusion_radius)


class TestMass:
    def test_single_center_matches_closed_form_per_radius(self):
        cfg = preset("taub-nut")
        result = mass(cfg)
        assert result.radii == (8.0, 16.0, 32.0, 64.0)
        for r, est in zip(result.radii, result.estimates):
            assert abs(est - _exact_single_center_mass(cfg.m, r)) < 1e-12
        assert abs(result.limit - cfg.m) < 1e-5

    def test_multi_center_limits(self):
        for name, want in (("two-center", 0.5), ("ak3", 0.75)):
            cfg = preset(name)
            result = mass(cfg)
            assert abs(result.limit - want) < 1e-5
            assert abs(result.limit - want) < 0.01 * want

    def test_flat_mass_is_exactly_zero(self):
        result = mass(preset("flat"))
        assert result.estimates == (0.0, 0.0, 0.0, 0.0)
        assert result.limit == 0.0

    def test_mass_chern_identity(self):
        # -8 pi * mass = L_inf * (Chern number at infinity)
        for name in ("taub-nut", "two-center"):
            cfg = preset(name)
            lhs = -8.0 * math.pi * mass(cfg).limit
            rhs = cfg.fiber_period * chern(cfg, None, large_sphere_radius(cfg))
            assert abs(lhs - rhs) < 1e-4 * abs(rhs)

    def test_default_radii(self):
        assert MASS_RADIUS_FACTORS == (8.0, 16.0, 32.0, 64.0)
        cfg = preset("two-center")
        assert default_mass_radii(cfg) == tuple(8.0 * cfg.scale * 2**i for i in range(4))

    def test_radius_schedule_validation(self):
        cfg = preset("taub-nut")
        with pytest.raises(ScheduleError):
            mass(cfg, radii=(8.0, 16.0))
        with pytest.raises(ScheduleError):
            mass(cfg, radii=(0.5, 8.0, 16.0))  # below max |a_i| + 1

    def test_unsorted_input_radii_are_sorted(self):
        cfg = preset("taub-nut")
        a = mass(cfg, radii=(16.0, 8.0, 32.0))
        b = mass(cfg, radii=(8.0, 16.0, 32.0))
        assert a == b


class TestExtrapolation:
    def test_polynomial_in_inverse_radius_is_recovered_exactly(self):
        radii = [2.0, 4.0, 8.0, 16.0]
        vals = [0.7 + 1.3 / r - 0.9 / r**2 + 0.11 / r**3 for r in radii]
        limit, table = extrapolate_in_inverse_radius(radii, vals)
        assert limit == pytest.approx(0.7, abs=1e-13)
        assert table[0] == vals
        assert len(table) == 4 and len(table[-1]) == 1

    def test_schedule_errors(self):
        with pytest.raises(ScheduleError):
            extrapolate_in_inverse_radius([2.0, 4.0], [0.0, 0.0])
        with pytest.raises(ScheduleError):
            extrapolate_in_inverse_radius([4.0, 2.0, 8.0], [0.0, 0.0, 0.0])
        with pytest.raises(ScheduleError):
            extrapolate_in_inverse_radius([2.0, 2.0, 8.0], [0.0, 0.0, 0.0])


class TestFiberLength:
    def test_closed_form(self):
        cfg = preset("taub-nut")
        # at distance 2m from the center V = 2, so L = L_inf / sqrt(2)
        x = np.array([2.0 * cfg.m, 0.0, 0.0])
        assert fiber_length(cfg, x) == pytest.approx(
            cfg.fiber_period / math.sqrt(2.0), rel=1e-14
        )

    def test_flat_fiber_length_is_the_period(self):
        cfg = preset("flat")
        xs = np.random.default_rng(30).normal(size=(20, 3))
        L = fiber_length_batch(cfg, xs)
        assert np.all(L == cfg.fiber_period)

    def test_monotone_in_distance(self):
        cfg = preset("taub-nut")
        radii = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
        L = np.array([fiber_length(cfg, [r, 0.0, 0.0]) for r in radii])
        assert np.all(np.diff(L) > 0)
        assert np.all(L < cfg.fiber_period)


class TestVolume:
    def test_ball_one_integral(self):
        for R in (1.0, 3.5, 10.0):
            assert ball_one_integral(R) == pytest.approx(
                4.0 * math.pi * R**3 / 3.0, rel=1e-13
            )

    def test_ball_inverse_distance_integral(self):
        R = 5.0
        for c in (np.zeros(3), np.array([0.7, -0.4, 1.1])):
            want = 2.0 * math.pi * (R * R - (c @ c) / 3.0)
            assert ball_inverse_distance_integral(c, R) == pytest.approx(want, rel=1e-12)
        with pytest.raises(QuadratureNodeError):
            ball_inverse_distance_integral([5.0, 0.0, 0.0], 5.0)

    def test_tube_volume_closed_form(self):
        cfg = preset("two-center")
        R = 20.0
        want = 4.0 * math.pi * R**3 / 3.0
        for i in range(cfg.k):
            a2 = float(cfg.centers_array[i] @ cfg.centers_array[i])
            want += 2.0 * cfg.masses[i] * 2.0 * math.pi * (R * R - a2 / 3.0)
        want *= cfg.fiber_period
        assert tube_volume(cfg, R) == pytest.approx(want, rel=1e-12)
        with pytest.raises(QuadratureNodeError):
            tube_volume(cfg, cfg.farthest_center_norm())

    def test_cubic_growth_constant(self):
        cfg = preset("two-center")
        R = 300.0 * sum(cfg.masses)
        want = 4.0 * math.pi * cfg.fiber_period / 3.0
        assert abs(tube_volume_cubic_ratio(cfg, R) / want - 1.0) < 0.01

    def test_doubling_ratio_approaches_eight(self):
        cfg = preset("ak3")
        assert abs(tube_volume_doubling_ratio(cfg, 128.0) - 8.0) < 0.16


class TestDeviationTensor:
    def test_matches_assembled_difference(self):
        cfg = preset("two-center")
        pts = random_admissible_points(cfg, 50, np.random.default_rng(31))
        e, de = deviation_tensor_batch(cfg, pts)
        g, dg, _, _ = metric_jets_batch(cfg, pts)
        h, dh, _, _ = model_metric_batch(cfg, pts)
        assert np.max(np.abs(e - (g - h))) < 1e-12
        assert np.max(np.abs(de - (dg - dh))) < 1e-12

    def test_flat_deviation_vanishes(self):
        cfg = preset("flat")
        pts = np.random.default_rng(32).normal(size=(10, 3))
        e, de = deviation_tensor_batch(cfg, pts)
        assert np.all(e == 0.0) and np.all(de == 0.0)
