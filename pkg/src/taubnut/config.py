"""Instanton configuration data.

The Gibbons-Hawking input for a cyclic ALF instanton is a mass parameter
m > 0 together with k >= 0 distinct NUT centers a_i in R^3.  k = 0 yields
the flat product R^3 x S^1, k >= 1 the multi-Taub-NUT family.  Everything
else is derived: the harmonic potential V = 1 + sum_i 2 m_i / |x - a_i|,
the fiber period L_inf = 8 pi m, and the exclusion radius guarding chart
evaluations near the centers (chart coordinates degenerate there even
though the underlying metric extends smoothly across the NUT points).

Equal masses are the rule: unequal per-center masses make the asymptotic
Chern number non-integer, and rescaling one monopole potential breaks
d(eta) = *dV.  Both defects are reachable only through the debug
constructors, so the verification suite can demonstrate that its checks
detect violations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

_DEFAULT_EPSILON_FACTOR = 1e-3


@dataclass(frozen=True)
class InstantonConfig:
    """Mass parameter, NUT centers, and evaluation guards.

    All lengths are in one common unit; angles are radians.  Instances are
    immutable after validation and safe to share between workers.
    """

    m: float
    centers: tuple = ()
    exclusion_radius: float = 0.0  # 0.0 means "use the default factor"
    masses: tuple = ()             # per-center; equal to m unless debugging
    connection_scales: tuple = ()  # per-center monopole rescale; 1.0 normally

    def __post_init__(self):
        if not (isinstance(self.m, (int, float)) and math.isfinite(self.m)):
            raise ConfigError("mass parameter m must be a finite number")
        if self.m <= 0:
            raise ConfigError("mass parameter m must be positive, got %r" % (self.m,))
        centers = tuple(tuple(float(c) for c in row) for row in self.centers)
        for row in centers:
            if len(row) != 3 or not all(math.isfinite(c) for c in row):
                raise ConfigError("each center must be a finite point of R^3, got %r" % (row,))
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "m", float(self.m))

        masses = tuple(float(v) for v in self.masses) if self.masses else tuple(self.m for _ in centers)
        if len(masses) != len(centers):
            raise ConfigError("need one mass per center: %d masses for %d centers" % (len(masses), len(centers)))
        if any(v <= 0 or not math.isfinite(v) for v in masses):
            raise ConfigError("per-center masses must be positive and finite")
        object.__setattr__(self, "masses", masses)

        scales = tuple(float(v) for v in self.connection_scales) if self.connection_scales else tuple(1.0 for _ in centers)
        if len(scales) != len(centers):
            raise ConfigError("need one connection scale per center")
        if any(v <= 0 or not math.isfinite(v) for v in scales):
            raise ConfigError("connection scales must be positive and finite")
        object.__setattr__(self, "connection_scales", scales)

        eps = float(self.exclusion_radius)
        if eps < 0 or not math.isfinite(eps):
            raise ConfigError("exclusion radius must be nonnegative and finite")
        if eps == 0.0:
            eps = _DEFAULT_EPSILON_FACTOR * (self._diameter_of(centers) + 1.0)
        object.__setattr__(self, "exclusion_radius", eps)

        # distinct centers: closer than 2*eps (in particular coincident) is rejected
        for i in range(len(centers)):
            for j in range(i + 1, len(centers)):
                d = math.dist(centers[i], centers[j])
                if d <= 2.0 * eps:
                    raise ConfigError(
                        "centers %d and %d are %.3g apart, within twice the exclusion radius %.3g"
                        % (i, j, d, eps)
                    )

    @staticmethod
    def _diameter_of(centers):
        best = 0.0
        for i in range(len(centers)):
            for j in range(i + 1, len(centers)):
                best = max(best, math.dist(centers[i], centers[j]))
        return best

    # -- derived geometry ------------------------------------------------

    @property
    def k(self):
        """Number of NUT centers."""
        return len(self.centers)

    @property
    def fiber_period(self):
        """Asymptotic fiber length L_inf = 8 pi m; also the t-period."""
        return 8.0 * math.pi * self.m

    @property
    def diameter(self):
        """Diameter of the center set (0 for k <= 1)."""
        return self._diameter_of(self.centers)

    @property
    def scale(self):
        """Length scale used to anchor radii schedules: diameter + 1."""
        return self.diameter + 1.0

    @property
    def centroid(self):
        if self.k == 0:
            return np.zeros(3)
        return self.centers_array.mean(axis=0)

    @property
    def centers_array(self):
        return np.asarray(self.centers, dtype=np.float64).reshape(self.k, 3)

    @property
    def masses_array(self):
        return np.asarray(self.masses, dtype=np.float64)

    @property
    def strengths_array(self):
        """Per-center monopole strengths: mass times connection scale."""
        return self.masses_array * np.asarray(self.connection_scales, dtype=np.float64)

    @property
    def is_debug(self):
        """True when the config deliberately violates the model identities."""
        return any(v != self.m for v in self.masses) or any(v != 1.0 for v in self.connection_scales)

    def farthest_center_norm(self):
        if self.k == 0:
            return 0.0
        return float(np.linalg.norm(self.centers_array, axis=1).max())

    # -- serialization ---------------------------------------------------

    def to_dict(self):
        out = {
            "m": self.m,
            "centers": [list(row) for row in self.centers],
            "exclusion_radius": self.exclusion_radius,
        }
        if self.is_debug:
            out["masses"] = list(self.masses)
            out["connection_scales"] = list(self.connection_scales)
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping, got %s" % type(data).__name__)
        known = {"m", "centers", "exclusion_radius", "masses", "connection_scales"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
        if "m" not in data:
            raise ConfigError("config is missing the mass parameter 'm'")
        return cls(
            m=data["m"],
            centers=tuple(tuple(row) for row in data.get("centers", ())),
            exclusion_radius=data.get("exclusion_radius", 0.0),
            masses=tuple(data.get("masses", ())),
            connection_scales=tuple(data.get("connection_scales", ())),
        )

    @classmethod
    def load(cls, path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config file %s: parse error at line %d column %d: %s"
                              % (path, exc.lineno, exc.colno, exc.msg)) from exc
        except OSError as exc:
            raise ConfigError("config file %s: %s" % (path, exc)) from exc
        return cls.from_dict(data)

    # -- debug constructors (deliberate violations, for negative controls)

    def with_unequal_masses(self, step=0.5):
        """Per-center masses m, 1.5 m, 2 m, ...: the asymptotic Chern number
        stops being an integer while every local identity still holds."""
        if self.k == 0:
            raise ConfigError("unequal-mass debug config needs at least one center")
        masses = tuple(self.m * (1.0 + step * i) for i in range(self.k))
        return InstantonConfig(self.m, self.centers, self.exclusion_radius, masses, self.connection_scales)

    def with_perturbed_connection(self, factor=1.05, center_index=0):
        """Rescale one monopole potential: d(eta) = *dV fails, and with it
        closedness of the Kahler forms, Ricci-flatness, and quantization."""
        if self.k == 0:
            raise ConfigError("perturbed-connection debug config needs at least one center")
        if not 0 <= center_index < self.k:
            raise ConfigError("center index %d out of range for k=%d" % (center_index, self.k))
        scales = list(self.connection_scales)
        scales[center_index] *= factor
        return InstantonConfig(self.m, self.centers, self.exclusion_radius, self.masses, tuple(scales))


def _ak_centers(k):
    # k collinear centers on the x1-axis, spacing 1, centered on the origin
    return tuple(((i - 0.5 * (k - 1)) * 1.0, 0.0, 0.0) for i in range(k))


_PRESETS = {
    "flat": lambda: InstantonConfig(m=0.5),
    "taub-nut": lambda: InstantonConfig(m=0.5, centers=((0.0, 0.0, 0.0),)),
    "two-center": lambda: InstantonConfig(m=0.25, centers=((0.75, 0.0, 0.0), (-0.75, 0.0, 0.0))),
}


def preset(name):
    """Resolve a named preset; 'ak<k>' puts k equal-mass centers on a line."""
    if name in _PRESETS:
        return _PRESETS[name]()
    if name == "ak":
        return preset("ak4")
    if name.startswith("ak") and name[2:].isdigit():
        k = int(name[2:])
        if k < 1:
            raise ConfigError("preset %r needs at least one center" % (name,))
        return InstantonConfig(m=0.25, centers=_ak_centers(k))
    raise ConfigError("unknown preset %r; known: %s, ak<k>" % (name, ", ".join(sorted(_PRESETS))))


def preset_names():
    """Named presets plus the ak<k> family pattern."""
    return tuple(sorted(_PRESETS)) + ("ak<k>",)
