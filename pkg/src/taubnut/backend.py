"""Kernel backend selection.

The hot per-point kernels exist twice: numba-jitted loops in
``_kernels_numba`` and vectorized numpy in ``_kernels_numpy``. The
environment flag ``TAUBNUT_BACKEND`` picks one:

- ``auto`` (default): numba when importable, numpy otherwise;
- ``numba``: require the jitted kernels, error if numba is missing;
- ``numpy``: force the pure-numpy fallback.

Both backends implement identical contracts and agree to roundoff; tests
cross-check them directly.
"""

from __future__ import annotations

import importlib
import os
import warnings

from .errors import ConfigError

ENV_VAR = "TAUBNUT_BACKEND"

_active_name = None
_active_module = None


def requested():
    return os.environ.get(ENV_VAR, "auto").strip().lower()


def _load(name):
    return importlib.import_module(f"taubnut._kernels_{name}")


def active_name():
    kernels()
    return _active_name


def kernels():
    """The active kernel module (resolved once, then cached)."""
    global _active_name, _active_module
    if _active_module is None:
        req = requested()
        if req not in ("auto", "numba", "numpy"):
            raise ConfigError(
                f"{ENV_VAR} must be auto, numba, or numpy (got {req!r})"
            )
        if req in ("auto", "numba"):
            try:
                _active_module = _load("numba")
                _active_name = "numba"
            except ImportError:
                if req == "numba":
                    raise
                warnings.warn("numba unavailable; using the numpy kernel fallback")
        if _active_module is None:
            _active_module = _load("numpy")
            _active_name = "numpy"
    return _active_module


def use(name):
    """Force a backend by name. Returns the previous name (for tests)."""
    global _active_name, _active_module
    prev = _active_name
    if name not in ("numba", "numpy"):
        raise ConfigError(f"unknown backend {name!r}")
    _active_module = _load(name)
    _active_name = name
    return prev
