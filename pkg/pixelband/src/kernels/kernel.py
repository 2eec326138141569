"""
Reproducing kernels used by the interpolant and the confidence bands.

Two translation-invariant, strictly positive definite kernels are supported:
- Paley-Wiener (band-limited functions, frequency bound eta)
- Gaussian (bandwidth sigma)

Every evaluation path funnels through kernel_matrix so that scalar, cross
and Gram evaluations of the same pair produce bit-identical values.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from pixelband.src.errors import InvalidArgumentError, ShapeMismatchError

# Below this |u_j - v_j| the PW factor switches to its Taylor series
PW_SERIES_THRESHOLD = 1e-8


class KernelKind(Enum):
    """Available kernel families."""
    PALEY_WIENER = "pw"
    GAUSSIAN = "gauss"


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to use and its hyper-parameter."""
    kind: KernelKind
    eta: float | None = None     # PW frequency bound
    sigma: float | None = None   # Gaussian bandwidth, domain units
    dim: int = 2

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidArgumentError(f"dim must be positive, got {self.dim}")
        if self.kind is KernelKind.PALEY_WIENER and not (self.eta and self.eta > 0):
            raise InvalidArgumentError(f"Paley-Wiener kernel needs eta > 0, got {self.eta}")
        if self.kind is KernelKind.GAUSSIAN and not (self.sigma and self.sigma > 0):
            raise InvalidArgumentError(f"Gaussian kernel needs sigma > 0, got {self.sigma}")

    @classmethod
    def paley_wiener(cls, eta: float, dim: int = 2) -> "KernelSpec":
        return cls(KernelKind.PALEY_WIENER, eta=eta, dim=dim)

    @classmethod
    def gaussian(cls, sigma: float, dim: int = 2) -> "KernelSpec":
        return cls(KernelKind.GAUSSIAN, sigma=sigma, dim=dim)

    @property
    def diagonal(self) -> float:
        """k(u, u), identical for every u."""
        if self.kind is KernelKind.PALEY_WIENER:
            return float((self.eta / np.pi) ** self.dim)
        return 1.0

    def label(self) -> str:
        if self.kind is KernelKind.PALEY_WIENER:
            return f"pw(eta={self.eta:g})"
        return f"gauss(sigma={self.sigma:g})"

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "eta": self.eta, "sigma": self.sigma, "dim": self.dim}


def _as_points(points, dim: int, name: str) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ShapeMismatchError(
            f"{name} must have shape (n, {dim}), got {np.shape(points)}"
        )
    return arr


def _pw_factor(delta: np.ndarray, eta: float) -> np.ndarray:
    """sin(eta * delta) / delta with the removable singularity filled in."""
    # even in delta, evaluated on |delta| so k(u, v) == k(v, u) bit for bit
    abs_delta = np.abs(delta)
    regular = abs_delta >= PW_SERIES_THRESHOLD
    safe = np.where(regular, abs_delta, 1.0)
    out = np.sin(eta * safe) / safe
    # 0 < |delta| < threshold: series avoids cancellation; delta == 0 gives exactly eta
    series = eta * (1.0 - (eta * abs_delta) ** 2 / 6.0)
    return np.where(regular, out, series)


def kernel_matrix(spec: KernelSpec, a, b) -> np.ndarray:
    """
    Pairwise kernel values between two point sets.

    Args:
        spec: kernel definition
        a: (n, d) points
        b: (m, d) points

    Returns:
        (n, m) matrix with entries k(a[i], b[j])
    """
    a = _as_points(a, spec.dim, "a")
    b = _as_points(b, spec.dim, "b")

    if spec.kind is KernelKind.PALEY_WIENER:
        out = np.ones((a.shape[0], b.shape[0]))
        for j in range(spec.dim):
            out *= _pw_factor(a[:, j, None] - b[None, :, j], spec.eta)
        return out / np.pi ** spec.dim

    sq = np.zeros((a.shape[0], b.shape[0]))
    for j in range(spec.dim):
        sq += (a[:, j, None] - b[None, :, j]) ** 2
    return np.exp(-sq / (2.0 * spec.sigma ** 2))


def eval_kernel(spec: KernelSpec, u, v) -> float:
    """k(u, v) for two single points."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != (spec.dim,) or v.shape != (spec.dim,):
        raise ShapeMismatchError(
            f"points must have dimension {spec.dim}, got {u.shape} and {v.shape}"
        )
    return float(kernel_matrix(spec, u, v)[0, 0])


def gram(spec: KernelSpec, points) -> np.ndarray:
    """Symmetric Gram matrix K[i, j] = k(points[i], points[j])."""
    pts = _as_points(points, spec.dim, "points")
    if pts.shape[0] == 0:
        raise InvalidArgumentError("gram needs at least one point")
    full = kernel_matrix(spec, pts, pts)
    # mirror the upper triangle so K is bit-exactly symmetric
    upper = np.triu(full)
    return upper + np.triu(full, 1).T


def cross_kernel(spec: KernelSpec, x0, points) -> tuple[float, np.ndarray]:
    """r0 = k(x0, x0) and k0[i] = k(x0, points[i])."""
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (spec.dim,):
        raise ShapeMismatchError(f"query must have dimension {spec.dim}, got {x0.shape}")
    pts = _as_points(points, spec.dim, "points")
    r0 = float(kernel_matrix(spec, x0, x0)[0, 0])
    k0 = kernel_matrix(spec, x0, pts)[0]
    return r0, k0
