"""
Shared fixtures for pixelband tests.
"""
import numpy as np
import pytest
import structlog

from pixelband.src.interp import SampleSet
from pixelband.src.kernels import KernelSpec


@pytest.fixture(autouse=True)
def quiet_logs():
    """Keep structlog output out of test runs."""
    structlog.configure(wrapper_class=structlog.make_filtering_bound_logger(40))
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _jittered_grid(side: int, rng: np.random.Generator) -> np.ndarray:
    spacing = 1.0 / side
    centers = (np.arange(side) + 0.5) * spacing
    ii, jj = np.meshgrid(centers, centers, indexing="ij")
    points = np.column_stack([ii.ravel(), jj.ravel()])
    return points + rng.uniform(-0.15 * spacing, 0.15 * spacing, size=points.shape)


@pytest.fixture
def make_instance():
    """
    Factory for well-conditioned (spec, samples) pairs.

    Inputs sit on a jittered grid and the kernel scale follows the grid
    spacing, so Gram matrices stay far from singular at any size.
    """
    def make(kind: str = "gauss", n: int = 16, seed: int = 0) -> tuple[KernelSpec, SampleSet]:
        rng = np.random.default_rng(seed)
        side = int(np.ceil(np.sqrt(n)))
        points = _jittered_grid(side, rng)
        points = points[np.sort(rng.choice(len(points), size=n, replace=False))]
        values = rng.uniform(-1.0, 1.0, size=n)
        spacing = 1.0 / side
        if kind == "pw":
            spec = KernelSpec.paley_wiener(0.8 * np.pi / spacing)
        else:
            spec = KernelSpec.gaussian(0.5 * spacing)
        return spec, SampleSet(points, values)

    return make


@pytest.fixture
def gauss_instance(make_instance):
    return make_instance("gauss", 16, seed=1)


@pytest.fixture
def pw_instance(make_instance):
    return make_instance("pw", 16, seed=2)
