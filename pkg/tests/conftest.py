import numpy as np
import pytest

from taubnut.config import preset
from taubnut.geometry import curvature_batch, model_metric_batch
from taubnut.integrals import _mass_estimate
from taubnut.sampling import random_admissible_points


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # touch every hot kernel once so jit compilation (first run only,
    # cached afterwards) never counts against a runtime budget
    cfg = preset("two-center")
    xs = random_admissible_points(cfg, 4, np.random.default_rng(0))
    curvature_batch(cfg, xs)
    model_metric_batch(cfg, xs)
    _mass_estimate(cfg, 8.0 * cfg.scale, None, 8, 16)
