"""
Choosing the diagonal jitter by leave-one-out error.

A kernel whose frequency bound is below the truth's cannot reproduce the
samples with bounded weights; the misfit behaves like noise and the plain
interpolant chases it. Jitter is expressed relative to the kernel diagonal
so the same grid means the same amount of smoothing for any eta.

With K = V diag(s) V^T, the leave-one-out residual of the jittered fit is
c_i / [(K + lam I)^-1]_ii with c = (K + lam I)^-1 y, so every candidate is
scored from a single eigendecomposition.
"""
import numpy as np
import structlog
from scipy import linalg

from pixelband.src.errors import InvalidArgumentError
from pixelband.src.interp.interpolant import SampleSet
from pixelband.src.kernels import KernelSpec, gram

logger = structlog.get_logger()

DEFAULT_RELATIVE_GRID = (1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0)


def loo_scores(spec: KernelSpec, samples: SampleSet, relative_grid) -> np.ndarray:
    """
    Mean squared leave-one-out residual for each relative jitter.

    Candidates that leave K + lam I indefinite score +inf.
    """
    grid = np.asarray(relative_grid, dtype=np.float64).reshape(-1)
    if grid.size == 0 or np.any(grid <= 0):
        raise InvalidArgumentError("relative jitter candidates must be positive")

    s, V = linalg.eigh(gram(spec, samples.points), check_finite=False)
    Vy = V.T @ samples.values
    V2 = V ** 2
    scores = np.full(grid.size, np.inf)
    for k, rel in enumerate(grid):
        shifted = s + rel * spec.diagonal
        if shifted.min() <= 0:
            continue
        c = V @ (Vy / shifted)
        inv_diag = V2 @ (1.0 / shifted)
        scores[k] = float(np.mean((c / inv_diag) ** 2))
    return scores


def select_jitter(
    spec: KernelSpec, samples: SampleSet, relative_grid=DEFAULT_RELATIVE_GRID
) -> float:
    """Absolute jitter (relative candidate times k(u, u)) with the lowest LOO error."""
    scores = loo_scores(spec, samples, relative_grid)
    best = int(np.argmin(scores))
    if not np.isfinite(scores[best]):
        raise InvalidArgumentError("no relative jitter candidate keeps the Gram matrix definite")
    jitter = float(relative_grid[best]) * spec.diagonal
    logger.debug("jitter_selected", kernel=spec.label(), relative=relative_grid[best],
                 jitter=jitter, loo_mse=scores[best])
    return jitter
