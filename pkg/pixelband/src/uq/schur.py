"""
Extending a fitted Gram system by one query point.

With K0 = [[r0, k0^T], [k0, K]] and the Cholesky factor of K already known,
the Schur complement g0 = r0 - k0^T K^-1 k0 and every quantity derived from
K0^-1 cost O(n^2) per query instead of a fresh O(n^3) inversion.
"""
import numpy as np
from scipy.linalg import solve_triangular

from pixelband.src.errors import NearDuplicateQueryError
from pixelband.src.interp import Interpolant
from pixelband.src.kernels import cross_kernel, gram

# g0 at or below this fraction of r0 means the query is numerically a sample
G0_RELATIVE_FLOOR = 1e-12


def schur_extend(interp: Interpolant, x0) -> tuple[float, float, np.ndarray]:
    """
    Schur complement, interpolant value and cross-kernel vector at x0.

    Returns:
        (g0, mean, k0) where mean = f(x0)

    Raises:
        NearDuplicateQueryError: g0 <= 1e-12 * r0
    """
    r0, k0 = cross_kernel(interp.spec, x0, interp.samples.points)
    # g0 = r0 - |L^-1 k0|^2 equals r0 - k0^T K^-1 k0 with one triangular solve
    v = solve_triangular(interp.factor.chol, k0, lower=True, check_finite=False)
    g0 = r0 - float(v @ v)
    floor = G0_RELATIVE_FLOOR * r0
    if g0 <= floor:
        raise NearDuplicateQueryError(g0=g0, floor=floor)
    mean = float(k0 @ interp.alpha)
    return g0, mean, k0


def extended_inverse(interp: Interpolant, x0) -> np.ndarray:
    """
    K0^-1 for the system extended by x0, query ordered first.

    Assembled from the block formula
        [[1/g0, -w^T/g0], [-w/g0, K^-1 + w w^T / g0]],  w = K^-1 k0.
    Only the literal quadratic path and the tests materialize this matrix.
    """
    g0, _, k0 = schur_extend(interp, x0)
    w = interp.factor.solve(k0)
    n = interp.n
    out = np.empty((n + 1, n + 1))
    out[0, 0] = 1.0 / g0
    out[0, 1:] = -w / g0
    out[1:, 0] = -w / g0
    out[1:, 1:] = interp.gram_inverse + np.outer(w, w) / g0
    return out


def extended_gram(interp: Interpolant, x0) -> np.ndarray:
    """K0 itself, query first; the reference the block inverse is checked against."""
    r0, k0 = cross_kernel(interp.spec, x0, interp.samples.points)
    n = interp.n
    out = np.empty((n + 1, n + 1))
    out[0, 0] = r0
    out[0, 1:] = k0
    out[1:, 0] = k0
    out[1:, 1:] = gram(interp.spec, interp.samples.points)
    out[1:, 1:][np.diag_indices(n)] += interp.jitter
    return out


def extended_norm_sq(interp: Interpolant, x0, y0: float) -> float:
    """
    Squared norm of the minimum-norm interpolant of the samples plus (x0, y0).

    Uses (y0, y) K0^-1 (y0, y)^T = norm_sq + (y0 - f(x0))^2 / g0.
    """
    g0, mean, _ = schur_extend(interp, x0)
    return interp.norm_sq + (y0 - mean) ** 2 / g0
