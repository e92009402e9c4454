"""Deterministic random sampling of admissible evaluation points.

Identity checks need points spread over the interesting range of the
geometry: near-field shells around individual centers and far-field
shells around the centroid, with log-uniform radii so no single decade
dominates.  Points keep a safety margin of five exclusion radii from
every center; the near-NUT regime is exercised separately by the
boundedness monitor, which controls its own radii.
"""

from __future__ import annotations

import numpy as np

from .config import InstantonConfig
from .errors import ConfigError

FAR_RANGE = (0.2, 20.0)     # centroid shells, in units of config.scale
NEAR_RANGE = (0.05, 2.0)    # per-center shells, in units of config.scale
MARGIN_FACTOR = 5.0         # times the exclusion radius
_MAX_ROUNDS = 64


def as_rng(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def _unit_vectors(rng, n):
    v = rng.normal(size=(n, 3))
    norms = np.linalg.norm(v, axis=1)
    # resample the (measure-zero) degenerate draws rather than dividing by ~0
    bad = norms < 1e-12
    while np.any(bad):
        v[bad] = rng.normal(size=(int(bad.sum()), 3))
        norms = np.linalg.norm(v, axis=1)
        bad = norms < 1e-12
    return v / norms[:, None]


def random_admissible_points(config, n, seed_or_rng=0, polar_guard=0.0):
    """n random points, log-uniform shells, >= 5 eps from every center.

    polar_guard > 0 additionally rejects points whose direction from any
    center lies within that angle (radians) of the +-e3 axis, so a fixed
    gauge chart stays admissible at the returned points.
    """
    rng = as_rng(seed_or_rng)
    n = int(n)
    if n <= 0:
        raise ConfigError("need a positive sample count")
    anchors = config.centers_array if config.k else np.zeros((1, 3))
    centroid = config.centroid
    scale = config.scale
    margin = MARGIN_FACTOR * config.exclusion_radius
    guard = float(polar_guard)
    out = np.empty((n, 3))
    have = 0
    for _ in range(_MAX_ROUNDS):
        want = n - have
        if want == 0:
            break
        m = 2 * want + 8
        far = rng.random(m) < 0.5
        lo = np.where(far, FAR_RANGE[0], NEAR_RANGE[0])
        hi = np.where(far, FAR_RANGE[1], NEAR_RANGE[1])
        radii = scale * np.exp(rng.uniform(np.log(lo), np.log(hi)))
        base = np.where(
            far[:, None], centroid[None, :], anchors[rng.integers(0, anchors.shape[0], m)]
        )
        pts = base + radii[:, None] * _unit_vectors(rng, m)
        rel = pts[:, None, :] - anchors[None, :, :]
        dist = np.linalg.norm(rel, axis=2)
        ok = dist.min(axis=1) >= max(margin, 1e-12)
        if guard > 0.0:
            cos = np.abs(rel[:, :, 2]) / np.maximum(dist, 1e-300)
            ok &= (cos <= np.cos(guard)).all(axis=1)
        good = pts[ok]
        take = min(want, good.shape[0])
        out[have:have + take] = good[:take]
        have += take
    if have < n:
        raise ConfigError("could not draw enough admissible points; guard too tight?")
    return out


def random_config(k, m, seed_or_rng=0, spread=1.0, exclusion_radius=0.0):
    """A k-center configuration with i.i.d. Gaussian centers, well separated."""
    rng = as_rng(seed_or_rng)
    k = int(k)
    if k == 0:
        return InstantonConfig(m=m)
    for _ in range(_MAX_ROUNDS):
        centers = rng.normal(size=(k, 3)) * float(spread)
        if k > 1:
            d = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
            np.fill_diagonal(d, np.inf)
            if d.min() <= 0.25 * float(spread):
                continue
        return InstantonConfig(m=m, centers=tuple(map(tuple, centers)),
                               exclusion_radius=exclusion_radius)
    raise ConfigError("could not draw a well-separated %d-center configuration" % k)
