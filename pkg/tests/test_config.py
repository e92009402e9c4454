import json
import math

import numpy as np
import pytest

from taubnut.config import InstantonConfig, preset, preset_names
from taubnut.errors import ConfigError


def test_flat_preset():
    cfg = preset("flat")
    assert cfg.k == 0
    assert cfg.m == 0.5
    assert cfg.fiber_period == pytest.approx(8.0 * math.pi * 0.5)
    assert cfg.diameter == 0.0
    assert cfg.scale == 1.0


def test_taub_nut_preset():
    cfg = preset("taub-nut")
    assert cfg.k == 1
    assert np.array_equal(cfg.centers_array, np.zeros((1, 3)))


def test_two_center_preset():
    cfg = preset("two-center")
    assert cfg.k == 2
    assert cfg.m == 0.25
    assert cfg.diameter == pytest.approx(1.5)
    assert cfg.scale == pytest.approx(2.5)
    assert np.array_equal(cfg.centroid, np.zeros(3))


def test_ak_family():
    cfg = preset("ak5")
    assert cfg.k == 5
    xs = cfg.centers_array
    assert np.allclose(xs[:, 1:], 0.0)
    assert np.allclose(np.diff(xs[:, 0]), 1.0)
    assert np.allclose(cfg.centroid, 0.0)
    assert preset("ak").k == preset("ak4").k == 4
    with pytest.raises(ConfigError):
        preset("ak0")
    with pytest.raises(ConfigError):
        preset("does-not-exist")
    assert "flat" in preset_names()


def test_exclusion_radius_default():
    cfg = preset("two-center")
    assert cfg.exclusion_radius == pytest.approx(1e-3 * (1.5 + 1.0))
    explicit = InstantonConfig(m=0.5, centers=((0.0, 0.0, 0.0),), exclusion_radius=0.05)
    assert explicit.exclusion_radius == 0.05


def test_validation_rejects_bad_inputs():
    with pytest.raises(ConfigError):
        InstantonConfig(m=0.0)
    with pytest.raises(ConfigError):
        InstantonConfig(m=-1.0)
    with pytest.raises(ConfigError):
        InstantonConfig(m=math.nan)
    with pytest.raises(ConfigError):
        InstantonConfig(m=0.5, centers=((0.0, 0.0),))
    with pytest.raises(ConfigError):
        InstantonConfig(m=0.5, centers=((0.0, 0.0, math.inf),))
    # centers closer than twice the exclusion radius are rejected
    with pytest.raises(ConfigError):
        InstantonConfig(m=0.5, centers=((0.0, 0.0, 0.0), (1e-9, 0.0, 0.0)))


def test_masses_and_strengths():
    cfg = preset("two-center")
    assert np.array_equal(cfg.masses_array, np.array([0.25, 0.25]))
    assert np.array_equal(cfg.strengths_array, cfg.masses_array)
    assert not cfg.is_debug


def test_unequal_mass_builder():
    cfg = preset("two-center").with_unequal_masses()
    assert cfg.is_debug
    assert np.allclose(cfg.masses_array, [0.25, 0.375])
    # fiber period keeps the nominal m
    assert cfg.fiber_period == preset("two-center").fiber_period


def test_perturbed_connection_builder():
    cfg = preset("taub-nut").with_perturbed_connection()
    assert cfg.is_debug
    assert np.allclose(cfg.strengths_array, [0.5 * 1.05])
    assert np.allclose(cfg.masses_array, [0.5])


def test_dict_round_trip():
    cfg = preset("ak3").with_unequal_masses()
    again = InstantonConfig.from_dict(cfg.to_dict())
    assert again == cfg
    with pytest.raises(ConfigError):
        InstantonConfig.from_dict({"m": 0.5, "bogus": 1})


def test_load_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(preset("two-center").to_dict()))
    cfg = InstantonConfig.load(str(path))
    assert cfg == preset("two-center")
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(ConfigError) as err:
        InstantonConfig.load(str(bad))
    assert "line" in str(err.value)


def test_farthest_center_norm():
    assert preset("flat").farthest_center_norm() == 0.0
    assert preset("two-center").farthest_center_norm() == pytest.approx(0.75)
