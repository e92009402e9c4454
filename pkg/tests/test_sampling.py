import numpy as np
import pytest

from taubnut.config import InstantonConfig, preset
from taubnut.errors import ConfigError
from taubnut.sampling import (
    MARGIN_FACTOR,
    as_rng,
    random_admissible_points,
    random_config,
)


def test_determinism_per_seed():
    cfg = preset("two-center")
    a = random_admissible_points(cfg, 100, 42)
    b = random_admissible_points(cfg, 100, 42)
    c = random_admissible_points(cfg, 100, 43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_generator_passthrough():
    cfg = preset("taub-nut")
    rng = np.random.default_rng(5)
    assert as_rng(rng) is rng
    a = random_admissible_points(cfg, 10, np.random.default_rng(5))
    b = random_admissible_points(cfg, 10, np.random.default_rng(5))
    assert np.array_equal(a, b)


def test_margin_from_centers():
    cfg = preset("ak3")
    pts = random_admissible_points(cfg, 500, 1)
    d = np.linalg.norm(pts[:, None, :] - cfg.centers_array[None, :, :], axis=2)
    assert d.min() >= MARGIN_FACTOR * cfg.exclusion_radius


def test_polar_guard():
    cfg = preset("two-center")
    guard = 0.3
    pts = random_admissible_points(cfg, 300, 2, polar_guard=guard)
    rel = pts[:, None, :] - cfg.centers_array[None, :, :]
    dist = np.linalg.norm(rel, axis=2)
    cos = np.abs(rel[:, :, 2]) / dist
    assert cos.max() <= np.cos(guard) + 1e-15


def test_positive_count_required():
    with pytest.raises(ConfigError):
        random_admissible_points(preset("taub-nut"), 0)


def test_impossible_guard_raises():
    cfg = preset("taub-nut")
    with pytest.raises(ConfigError):
        random_admissible_points(cfg, 10, 3, polar_guard=np.pi / 2)


def test_random_config_properties():
    cfg = random_config(4, 0.25, 7, spread=1.5)
    assert isinstance(cfg, InstantonConfig)
    assert cfg.k == 4 and cfg.m == 0.25
    d = np.linalg.norm(
        cfg.centers_array[:, None, :] - cfg.centers_array[None, :, :], axis=2
    )
    np.fill_diagonal(d, np.inf)
    assert d.min() > 0.25 * 1.5
    again = random_config(4, 0.25, 7, spread=1.5)
    assert np.array_equal(cfg.centers_array, again.centers_array)


def test_random_config_flat():
    cfg = random_config(0, 0.5, 11)
    assert cfg.k == 0
    assert cfg.m == 0.5


def test_flat_sampling_works():
    cfg = preset("flat")
    pts = random_admissible_points(cfg, 50, 13)
    assert pts.shape == (50, 3)
    assert np.isfinite(pts).all()
