"""
Pixel grid geometry: coordinates, masks, sample extraction and subsampling.

Pixel (i, j), 1-based, sits at (i / (h + 1), j / (w + 1)) so every input lies
strictly inside the unit square. All enumerations are row-major.
"""
from dataclasses import dataclass

import numpy as np

from pixelband.src.errors import InvalidArgumentError, NoDataError, ShapeMismatchError
from pixelband.src.imaging.image import Image, Scale
from pixelband.src.interp import SampleSet


@dataclass(frozen=True)
class Mask:
    """h x w booleans, True = observed."""
    observed: np.ndarray

    def __post_init__(self):
        observed = np.asarray(self.observed, dtype=bool)
        if observed.ndim != 2:
            raise ShapeMismatchError(f"mask must be 2-D, got shape {observed.shape}")
        object.__setattr__(self, "observed", observed)

    @property
    def shape(self) -> tuple[int, int]:
        return self.observed.shape

    @property
    def count(self) -> int:
        return int(self.observed.sum())

    @property
    def missing(self) -> int:
        return self.observed.size - self.count

    @classmethod
    def full(cls, h: int, w: int) -> "Mask":
        return cls(np.ones((h, w), dtype=bool))

    @classmethod
    def from_image(cls, image: Image) -> "Mask":
        """Any nonzero pixel of channel 0 counts as observed."""
        if image.scale is not Scale.RAW:
            raise InvalidArgumentError("masks are read from raw images")
        return cls(image.channel(0) != 0)

    def to_image(self) -> Image:
        return Image(np.where(self.observed, 255, 0).astype(np.uint8))


def grid_coords(h: int, w: int) -> np.ndarray:
    """(h*w, 2) inputs of every pixel, row-major."""
    if h < 1 or w < 1:
        raise InvalidArgumentError(f"grid dimensions must be positive, got {h}x{w}")
    rows = np.arange(1, h + 1) / (h + 1)
    cols = np.arange(1, w + 1) / (w + 1)
    ii, jj = np.meshgrid(rows, cols, indexing="ij")
    return np.column_stack([ii.ravel(), jj.ravel()])


def pixel_indices(h: int, w: int) -> np.ndarray:
    """(h*w, 2) 1-based (i, j) pairs, row-major."""
    ii, jj = np.meshgrid(np.arange(1, h + 1), np.arange(1, w + 1), indexing="ij")
    return np.column_stack([ii.ravel(), jj.ravel()])


def split_observed(
    image: Image,
    mask: Mask,
    channel: int = 0,
) -> tuple[SampleSet, np.ndarray, np.ndarray]:
    """
    Observed pixels become samples, unobserved pixels become queries.

    Returns:
        (samples, queries (q, 2), query_pixels (q, 2) 1-based)

    Raises:
        ShapeMismatchError: mask and image differ in size
        NoDataError: the mask observes nothing
    """
    if image.scale is not Scale.NORMALIZED:
        raise InvalidArgumentError("split_observed needs a normalized image")
    if mask.shape != image.shape:
        raise ShapeMismatchError(f"mask is {mask.shape}, image is {image.shape}")
    if mask.count == 0:
        raise NoDataError("the mask has no observed pixels")

    h, w = image.shape
    coords = grid_coords(h, w)
    pixels = pixel_indices(h, w)
    flat = mask.observed.ravel()
    values = image.channel(channel).ravel()
    samples = SampleSet(coords[flat], values[flat])
    return samples, coords[~flat], pixels[~flat]


def random_mask(h: int, w: int, fraction: float, seed: int | None = None) -> Mask:
    """Exactly round(fraction * h * w) observed pixels, uniformly without replacement."""
    if not 0.0 < fraction <= 1.0:
        raise InvalidArgumentError(f"fraction must lie in (0, 1], got {fraction}")
    count = int(round(fraction * h * w))
    if count == 0:
        raise InvalidArgumentError(f"fraction {fraction} observes no pixel of a {h}x{w} grid")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(h * w, size=count, replace=False)
    observed = np.zeros(h * w, dtype=bool)
    observed[chosen] = True
    return Mask(observed.reshape(h, w))


def _squared_distances(h: int, w: int, center_px: tuple[float, float]) -> np.ndarray:
    ii, jj = np.meshgrid(np.arange(1, h + 1), np.arange(1, w + 1), indexing="ij")
    return (ii - center_px[0]) ** 2 + (jj - center_px[1]) ** 2


def circle_mask(h: int, w: int, center_px: tuple[float, float], radius_px: float) -> Mask:
    """Pixels strictly inside the disk (1-based pixel units) are unobserved."""
    if radius_px < 0:
        raise InvalidArgumentError(f"radius must be nonnegative, got {radius_px}")
    inside = _squared_distances(h, w, center_px) < radius_px ** 2
    return Mask(~inside)


def circle_mask_for_count(h: int, w: int, observed: int) -> tuple[Mask, float]:
    """
    Centered disk whose observed count is closest to the requested one.

    Returns the mask and the chosen radius. Ties go to the smaller disk.
    """
    if not 0 <= observed <= h * w:
        raise InvalidArgumentError(f"observed must lie in [0, {h * w}], got {observed}")
    center = ((h + 1) / 2.0, (w + 1) / 2.0)
    d2 = np.sort(_squared_distances(h, w, center).ravel())
    # a radius of sqrt(u) removes every pixel with d2 < u
    candidates = np.concatenate([[0.0], np.unique(d2), [d2[-1] + 1.0]])
    removed = np.searchsorted(d2, candidates, side="left")
    best = int(np.argmin(np.abs(h * w - removed - observed)))
    radius = float(np.sqrt(candidates[best]))
    return circle_mask(h, w, center, radius), radius


def subsample(image: Image, stride: int) -> Image:
    """Keep 1-based pixels with i, j = 1 (mod stride)."""
    if stride < 2:
        raise InvalidArgumentError(f"stride must be at least 2, got {stride}")
    h, w = image.shape
    if h % stride or w % stride:
        raise InvalidArgumentError(f"{h}x{w} image is not divisible by stride {stride}")
    return Image(image.data[::stride, ::stride], scale=image.scale, maxval=image.maxval)


def embed_mask(h: int, w: int, stride: int) -> Mask:
    """Fine-grid mask of the positions a stride-subsampled image came from."""
    observed = np.zeros((h * stride, w * stride), dtype=bool)
    observed[::stride, ::stride] = True
    return Mask(observed)


def embed(image: Image, stride: int) -> tuple[Image, Mask]:
    """
    Place a low-resolution image on the fine grid.

    Low-res pixel (i, j) lands on fine pixel ((i-1)*stride+1, (j-1)*stride+1);
    every other fine pixel is zero and unobserved.
    """
    h, w = image.shape
    mask = embed_mask(h, w, stride)
    fine = np.zeros((h * stride, w * stride, image.channels), dtype=image.data.dtype)
    fine[::stride, ::stride] = image.data
    return Image(fine, scale=image.scale, maxval=image.maxval), mask
