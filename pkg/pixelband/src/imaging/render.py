"""
Visualizations of a fitted band: relative uncertainty and kernel weights.
"""
import numpy as np

from pixelband.src.errors import InvalidArgumentError, ShapeMismatchError
from pixelband.src.imaging.grid import Mask
from pixelband.src.imaging.image import Image
from pixelband.src.interp import Interpolant
from pixelband.src.uq import ConfidenceBand

LUMINANCE_WEIGHTS = np.array([0.3, 0.59, 0.11])
U_MAX_FLOOR = 1e-12


def relative_uncertainty(widths: np.ndarray) -> np.ndarray:
    """
    1 - (width / U_max)^(1/4) per query.

    Failed queries (NaN width) count as maximally uncertain.
    """
    widths = np.asarray(widths, dtype=np.float64)
    finite = np.isfinite(widths)
    u_max = max(float(widths[finite].max()) if finite.any() else 0.0, U_MAX_FLOOR)
    ratio = np.where(finite, np.clip(widths, 0.0, None) / u_max, 1.0)
    return 1.0 - ratio ** 0.25


def _combine(maps: list[np.ndarray]) -> np.ndarray:
    if len(maps) == 1:
        return maps[0]
    if len(maps) == 3:
        return sum(weight * plane for weight, plane in zip(LUMINANCE_WEIGHTS, maps, strict=True))
    return np.mean(maps, axis=0)


def uncertainty_map(
    bands: list[ConfidenceBand],
    query_pixels: np.ndarray,
    h: int,
    w: int,
) -> np.ndarray:
    """(h, w) relative uncertainty in [0, 1]; observed pixels are 1."""
    if not bands:
        raise InvalidArgumentError("at least one band is required")
    query_pixels = np.asarray(query_pixels, dtype=int).reshape(-1, 2)
    rows, cols = query_pixels[:, 0] - 1, query_pixels[:, 1] - 1
    maps = []
    for band in bands:
        if len(band) != len(query_pixels):
            raise ShapeMismatchError(
                f"band has {len(band)} queries but {len(query_pixels)} pixels were given"
            )
        plane = np.ones((h, w))
        if len(band):
            plane[rows, cols] = relative_uncertainty(band.width)
        maps.append(plane)
    return _combine(maps)


def render_uncertainty(
    bands: list[ConfidenceBand],
    query_pixels: np.ndarray,
    h: int,
    w: int,
) -> Image:
    """Grayscale rendering of uncertainty_map, u mapped to round(255 u)."""
    u = uncertainty_map(bands, query_pixels, h, w)
    return Image(np.rint(np.clip(u, 0.0, 1.0) * 255.0))


def weight_map(interp: Interpolant, mask: Mask, p: float = 0.25) -> np.ndarray:
    """
    Kernel weights on the pixel grid, rescaled into [-1, 1].

    The coefficients are divided by their largest magnitude and passed
    through sign(a)|a|^p. Unobserved pixels hold 0.
    """
    if p <= 0:
        raise InvalidArgumentError(f"p must be positive, got {p}")
    if interp.n != mask.count:
        raise ShapeMismatchError(
            f"interpolant has {interp.n} weights but the mask observes {mask.count} pixels"
        )
    alpha = interp.alpha
    peak = float(np.max(np.abs(alpha)))
    out = np.zeros(mask.shape)
    if peak == 0.0:
        return out
    scaled = alpha / peak
    out[mask.observed] = np.sign(scaled) * np.abs(scaled) ** p
    return out


def render_weights(interp: Interpolant, mask: Mask, p: float = 0.25) -> Image:
    """Grayscale weight map, t in [-1, 1] mapped to round((t + 1) / 2 * 255)."""
    t = weight_map(interp, mask, p)
    return Image(np.rint((t + 1.0) / 2.0 * 255.0))
