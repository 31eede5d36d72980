import numpy as np
import pytest

from coshrem.measures import DetectionParams
from coshrem.shearlets import SystemParams, build_system

SMALL = 64


@pytest.fixture(scope="session")
def small_system():
    """64x64 system shared by fast unit tests."""
    return build_system(SystemParams(20, 10, 2, 2.0, 2, 0.6), SMALL, SMALL)


@pytest.fixture(scope="session")
def small_det():
    return DetectionParams(min_contrast=10.0, epsilon_factor=0.05,
                           pivot_scales=(0, 1))


@pytest.fixture(scope="session")
def mid_edge_system():
    """256x256 system with the benchmark edge parameters."""
    from coshrem.bench import GRID_EDGE_SYSTEM

    return build_system(GRID_EDGE_SYSTEM, 256, 256)


@pytest.fixture(scope="session")
def mid_ridge_system():
    from coshrem.bench import GRID_RIDGE_SYSTEM

    return build_system(GRID_RIDGE_SYSTEM, 256, 256)
