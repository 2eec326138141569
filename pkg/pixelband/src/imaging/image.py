"""
Image container and the intensity encoding used by the interpolant.

Raw images hold integers in {0..maxval}; normalized images hold reals in
[-1, 1] via v -> 2v/M - 1.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from pixelband.src.errors import InvalidArgumentError, ShapeMismatchError

NORMALIZED_TOLERANCE = 1e-9
MAX_MAXVAL = 255


class Scale(Enum):
    """How the intensities of an Image are stored."""
    RAW = "raw"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class Image:
    """h x w x channels intensities with an explicit scale tag."""
    data: np.ndarray
    scale: Scale = Scale.RAW
    maxval: int = MAX_MAXVAL

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ShapeMismatchError(f"image data must be (h, w, c), got {np.shape(self.data)}")
        if data.shape[2] < 1:
            raise ShapeMismatchError("image needs at least one channel")
        if not 1 <= self.maxval <= MAX_MAXVAL:
            raise InvalidArgumentError(f"maxval must lie in [1, {MAX_MAXVAL}], got {self.maxval}")

        if self.scale is Scale.RAW:
            if not np.all(np.isfinite(data)) or np.any(data != np.rint(data)):
                raise InvalidArgumentError("raw images hold integer intensities")
            if data.min() < 0 or data.max() > self.maxval:
                raise InvalidArgumentError(f"raw intensities must lie in [0, {self.maxval}]")
            data = data.astype(np.uint8)
        else:
            data = data.astype(np.float64)
            if np.any(np.abs(data) > 1.0 + NORMALIZED_TOLERANCE):
                raise InvalidArgumentError("normalized intensities must lie in [-1, 1]")
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    @property
    def is_color(self) -> bool:
        return self.channels == 3

    def channel(self, c: int) -> np.ndarray:
        """One channel as an (h, w) array."""
        if not 0 <= c < self.channels:
            raise InvalidArgumentError(f"channel {c} out of range for {self.channels} channels")
        return self.data[:, :, c]


def normalize(image: Image) -> Image:
    """Raw {0..M} to [-1, 1]."""
    if image.scale is Scale.NORMALIZED:
        return image
    values = 2.0 * image.data.astype(np.float64) / image.maxval - 1.0
    return Image(values, scale=Scale.NORMALIZED, maxval=image.maxval)


def denormalize(image: Image, clamp: bool = False, maxval: int | None = None) -> Image:
    """
    [-1, 1] back to raw integers, rounding to nearest.

    With clamp the values are clipped to [0, M] before rounding, which is how
    unclamped band endpoints are rendered. Without clamp an out-of-range value
    raises InvalidArgumentError.
    """
    if image.scale is Scale.RAW:
        return image
    M = maxval or image.maxval
    raw = (image.data + 1.0) * M / 2.0
    if clamp:
        raw = np.clip(raw, 0.0, M)
    raw = np.rint(raw)
    if raw.min() < 0 or raw.max() > M:
        raise InvalidArgumentError("normalized values outside [-1, 1]; render with clamp=True")
    return Image(raw, scale=Scale.RAW, maxval=M)


def to_raw_values(values: np.ndarray, maxval: int = MAX_MAXVAL) -> np.ndarray:
    """Clamped raw rendering of an arbitrary array of normalized values."""
    raw = np.clip((np.asarray(values, dtype=np.float64) + 1.0) * maxval / 2.0, 0.0, maxval)
    return np.rint(raw).astype(np.uint8)
