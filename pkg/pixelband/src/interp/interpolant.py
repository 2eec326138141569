"""
Minimum-norm kernel interpolation.

The interpolant f(x) = sum_k alpha_k k(x, x_k) with alpha = K^-1 y is the
element of the RKHS with the smallest norm that reproduces every sample.
The Cholesky factor of K is kept on the fitted object so the uncertainty
module can extend the system to a query point in O(n^2).
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog
from scipy.linalg import cho_solve, lapack

from pixelband.src.errors import (
    ConditioningError,
    DuplicateInputError,
    InvalidArgumentError,
    ShapeMismatchError,
)
from pixelband.src.kernels import KernelSpec, gram, kernel_matrix

logger = structlog.get_logger()

VALUE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SampleSet:
    """Observed (input, intensity) pairs on [0, 1]^d x [-1, 1]."""
    points: np.ndarray   # (n, d)
    values: np.ndarray   # (n,)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if points.ndim != 2:
            raise ShapeMismatchError(f"points must be (n, d), got shape {points.shape}")
        if values.shape != (points.shape[0],):
            raise ShapeMismatchError(
                f"values must have shape ({points.shape[0]},), got {values.shape}"
            )
        if points.shape[0] == 0:
            raise InvalidArgumentError("a sample set needs at least one observation")
        if np.any(np.abs(values) > 1.0 + VALUE_TOLERANCE):
            raise InvalidArgumentError("sample values must be scaled into [-1, 1]")
        if np.any(points < -VALUE_TOLERANCE) or np.any(points > 1.0 + VALUE_TOLERANCE):
            raise InvalidArgumentError("sample inputs must lie in [0, 1]^d")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def with_values(self, values) -> "SampleSet":
        """Same inputs, different outputs (one color channel to the next)."""
        return SampleSet(self.points, values)


def find_duplicates(points: np.ndarray) -> list[tuple[int, int]]:
    """Index pairs (first, later) of exactly coinciding inputs."""
    _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    pairs = []
    for idx, group in enumerate(inverse):
        if first[group] != idx:
            pairs.append((int(first[group]), idx))
    return pairs


@dataclass(frozen=True)
class GramFactor:
    """Cholesky factor of K + jitter * I for a fixed input set."""
    spec: KernelSpec
    points: np.ndarray
    chol: np.ndarray     # lower triangular L with L L^T = K + jitter I
    jitter: float = 0.0

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """(K + jitter I)^-1 rhs via two triangular solves."""
        return cho_solve((self.chol, True), rhs, check_finite=False)


def factorize(spec: KernelSpec, points, jitter: float = 0.0) -> GramFactor:
    """
    Build and factor the Gram matrix of a set of inputs.

    Raises:
        DuplicateInputError: two inputs coincide
        ConditioningError: K + jitter I is not numerically positive definite
    """
    if jitter < 0:
        raise InvalidArgumentError(f"jitter must be nonnegative, got {jitter}")
    points = np.asarray(points, dtype=np.float64)

    pairs = find_duplicates(points)
    if pairs:
        raise DuplicateInputError(pairs)

    K = gram(spec, points)
    if jitter > 0:
        K[np.diag_indices_from(K)] += jitter

    chol, info = lapack.dpotrf(K, lower=1, clean=1, overwrite_a=1)
    if info > 0:
        logger.warning("gram_factorization_failed", n=len(points), pivot=info, jitter=jitter)
        raise ConditioningError(pivot=int(info), jitter=jitter)
    if info < 0:
        raise InvalidArgumentError(f"dpotrf rejected argument {-info}")

    logger.debug("gram_factorized", n=len(points), kernel=spec.label(), jitter=jitter)
    return GramFactor(spec=spec, points=points, chol=chol, jitter=jitter)


@dataclass(frozen=True)
class Interpolant:
    """A fitted minimum-norm interpolant."""
    samples: SampleSet
    spec: KernelSpec
    factor: GramFactor
    alpha: np.ndarray
    norm_sq: float

    @property
    def n(self) -> int:
        return self.samples.n

    @property
    def jitter(self) -> float:
        return self.factor.jitter

    @cached_property
    def sample_lookup(self) -> dict[tuple[float, ...], int]:
        """Exact-coordinate lookup from a sample input to its index."""
        return {tuple(p): i for i, p in enumerate(self.samples.points.tolist())}

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        """Dense (K + jitter I)^-1, only used by the literal extended-inverse path."""
        inv = self.factor.solve(np.eye(self.n))
        return (inv + inv.T) / 2.0

    def coincident_sample(self, x0) -> int | None:
        """Index of the sample with exactly the same coordinates as x0, if any."""
        return self.sample_lookup.get(tuple(np.asarray(x0, dtype=np.float64).tolist()))


def fit_with_factor(factor: GramFactor, samples: SampleSet) -> Interpolant:
    """Fit on inputs whose Gram factor is already known."""
    if samples.points.shape != factor.points.shape or not np.array_equal(
        samples.points, factor.points
    ):
        raise ShapeMismatchError("sample inputs differ from the factored inputs")
    alpha = factor.solve(samples.values)
    norm = float(samples.values @ alpha)
    return Interpolant(
        samples=samples,
        spec=factor.spec,
        factor=factor,
        alpha=alpha,
        norm_sq=max(norm, 0.0),
    )


def fit(spec: KernelSpec, samples: SampleSet, jitter: float = 0.0) -> Interpolant:
    """Fit the minimum-norm interpolant of a sample set."""
    if samples.dim != spec.dim:
        raise ShapeMismatchError(
            f"samples are {samples.dim}-dimensional but the kernel expects {spec.dim}"
        )
    factor = factorize(spec, samples.points, jitter=jitter)
    interp = fit_with_factor(factor, samples)
    logger.debug(
        "interpolant_fitted",
        n=samples.n,
        kernel=spec.label(),
        jitter=jitter,
        norm_sq=round(interp.norm_sq, 6),
    )
    return interp


def predict(interp: Interpolant, x0) -> float:
    """f(x0) = sum_k alpha_k k(x0, x_k)."""
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (interp.spec.dim,):
        raise ShapeMismatchError(
            f"query must have dimension {interp.spec.dim}, got {x0.shape}"
        )
    return float(kernel_matrix(interp.spec, x0, interp.samples.points)[0] @ interp.alpha)


def predict_many(interp: Interpolant, queries, chunk_size: int = 2048) -> np.ndarray:
    """Vectorized predict over an (m, d) array of queries."""
    queries = np.asarray(queries, dtype=np.float64).reshape(-1, interp.spec.dim)
    out = np.empty(queries.shape[0])
    for start in range(0, queries.shape[0], chunk_size):
        block = queries[start:start + chunk_size]
        out[start:start + len(block)] = (
            kernel_matrix(interp.spec, block, interp.samples.points) @ interp.alpha
        )
    return out


def norm_sq(interp: Interpolant) -> float:
    """Squared RKHS norm of the interpolant, y^T K^-1 y."""
    return interp.norm_sq
