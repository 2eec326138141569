"""
Classical upsampling baselines: nearest neighbour, bilinear and bicubic.

All three are separable. A 1-D weight matrix maps the source axis to the
output axis with half-pixel centers (output p sits at source coordinate
(p + 0.5) / scale - 0.5); taps past the border are clamped to the edge.
"""
from collections.abc import Callable

import numpy as np

from pixelband.src.errors import InvalidArgumentError
from pixelband.src.imaging import Image, Scale

KEYS_A = -0.5


def _source_coords(n_out: int, scale: int) -> np.ndarray:
    return (np.arange(n_out) + 0.5) / scale - 0.5


def nearest_weights(n: int, scale: int) -> np.ndarray:
    out = np.zeros((n * scale, n))
    idx = np.minimum(np.floor((np.arange(n * scale) + 0.5) / scale).astype(int), n - 1)
    out[np.arange(n * scale), idx] = 1.0
    return out


def linear_weights(n: int, scale: int) -> np.ndarray:
    src = _source_coords(n * scale, scale)
    i0 = np.floor(src).astype(int)
    t = src - i0
    out = np.zeros((n * scale, n))
    rows = np.arange(n * scale)
    np.add.at(out, (rows, np.clip(i0, 0, n - 1)), 1.0 - t)
    np.add.at(out, (rows, np.clip(i0 + 1, 0, n - 1)), t)
    return out


def keys_kernel(x: np.ndarray, a: float = KEYS_A) -> np.ndarray:
    """Cubic convolution kernel."""
    x = np.abs(x)
    near = ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    far = ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a
    return np.where(x <= 1.0, near, np.where(x < 2.0, far, 0.0))


def cubic_weights(n: int, scale: int) -> np.ndarray:
    src = _source_coords(n * scale, scale)
    i0 = np.floor(src).astype(int)
    out = np.zeros((n * scale, n))
    rows = np.arange(n * scale)
    for tap in range(-1, 3):
        k = i0 + tap
        np.add.at(out, (rows, np.clip(k, 0, n - 1)), keys_kernel(src - k))
    return out


def _upsample(image: Image, scale: int, weights: Callable[[int, int], np.ndarray]) -> Image:
    if scale < 2:
        raise InvalidArgumentError(f"scale must be at least 2, got {scale}")
    rows = weights(image.height, scale)
    cols = weights(image.width, scale)
    data = image.data.astype(np.float64)
    planes = [rows @ data[:, :, c] @ cols.T for c in range(image.channels)]
    out = np.stack(planes, axis=2)
    if image.scale is Scale.RAW:
        out = np.clip(np.rint(out), 0, image.maxval)
    else:
        out = np.clip(out, -1.0, 1.0)
    return Image(out, scale=image.scale, maxval=image.maxval)


def upsample_nearest(image: Image, scale: int) -> Image:
    return _upsample(image, scale, nearest_weights)


def upsample_bilinear(image: Image, scale: int) -> Image:
    return _upsample(image, scale, linear_weights)


def upsample_bicubic(image: Image, scale: int) -> Image:
    """Keys cubic convolution (a = -0.5); raw output is clipped to [0, maxval]."""
    return _upsample(image, scale, cubic_weights)


BASELINES: dict[str, Callable[[Image, int], Image]] = {
    "nearest": upsample_nearest,
    "bilinear": upsample_bilinear,
    "bicubic": upsample_bicubic,
}
