"""
Reconstruction workflows: inpainting and super-resolution with bands.

Both workflows reduce to the same core. Observed pixels become samples,
missing pixels become queries, each channel gets its own interpolant
(sharing one Gram factorization) and its own band.
"""
import time
from dataclasses import dataclass, field

import numpy as np
import structlog

from pixelband.src.baselines import BASELINES
from pixelband.src.errors import ShapeMismatchError
from pixelband.src.imaging import (
    MAX_MAXVAL,
    Image,
    Mask,
    Scale,
    embed,
    normalize,
    split_observed,
    to_raw_values,
)
from pixelband.src.interp import Interpolant, factorize, fit_with_factor, predict_many
from pixelband.src.kernels import KernelSpec
from pixelband.src.pipeline.config import RunConfig
from pixelband.src.uq import ConfidenceBand, bands_for_channels

logger = structlog.get_logger()

TESTED_SCALES = (2, 4)


@dataclass
class Reconstruction:
    """Point estimate and band images of one run, on the normalized scale."""
    mask: Mask
    query_pixels: np.ndarray          # (q, 2), 1-based
    estimate: np.ndarray              # (h, w, c)
    lower: np.ndarray
    upper: np.ndarray
    interps: list[Interpolant]
    bands: list[ConfidenceBand]
    timings: dict[str, float] = field(default_factory=dict)
    baselines: dict[str, Image] = field(default_factory=dict)
    maxval: int = MAX_MAXVAL           # of the input image; rendered outputs reuse it

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape

    @property
    def channels(self) -> int:
        return self.estimate.shape[2]

    @property
    def failures(self) -> int:
        return sum(len(b.failures) for b in self.bands)

    def _render(self, values: np.ndarray) -> Image:
        return Image(to_raw_values(values, self.maxval), maxval=self.maxval)

    def estimate_image(self) -> Image:
        return self._render(self.estimate)

    # failed queries have no bounds and render as the widest interval
    def lower_image(self) -> Image:
        return self._render(np.nan_to_num(self.lower, nan=-1.0))

    def upper_image(self) -> Image:
        return self._render(np.nan_to_num(self.upper, nan=1.0))

    def covers(self, truth: np.ndarray) -> np.ndarray:
        """(q, c) containment of truth values (h, w, c) at the query pixels."""
        rows, cols = self.query_pixels[:, 0] - 1, self.query_pixels[:, 1] - 1
        out = np.ones((len(self.query_pixels), self.channels), dtype=bool)
        for band in self.bands:
            out[:, band.channel] = band.contains(truth[rows, cols, band.channel])
        return out


def reconstruct(config: RunConfig, image: Image, mask: Mask) -> Reconstruction:
    """
    Fit every channel on the observed pixels and band the rest.

    Observed pixels are passed through unchanged in every output image.

    Raises:
        ShapeMismatchError: mask and image differ in size
        NoDataError: the mask observes nothing
        ConditioningError: the Gram matrix could not be factored
    """
    if mask.shape != image.shape:
        raise ShapeMismatchError(f"mask is {mask.shape}, image is {image.shape}")
    normalized = normalize(image)
    spec = config.kernel_spec()

    started = time.perf_counter()
    per_channel = []
    for c in range(normalized.channels):
        samples, queries, query_pixels = split_observed(normalized, mask, channel=c)
        per_channel.append(samples)
    factor = factorize(spec, per_channel[0].points, jitter=config.jitter)
    interps = [fit_with_factor(factor, samples) for samples in per_channel]
    fitted = time.perf_counter()

    bands = bands_for_channels(
        interps,
        config.gamma,
        queries,
        kappa_mode=config.resolved_kappa_mode,
        kappa=config.kappa,
        delta0=config.delta0,
        delta_r=config.delta_r,
        literal_alg1=config.literal_alg1,
        threads=config.threads,
        strict=config.strict,
    )
    finished = time.perf_counter()

    estimate = normalized.data.copy()
    lower = normalized.data.copy()
    upper = normalized.data.copy()
    rows, cols = query_pixels[:, 0] - 1, query_pixels[:, 1] - 1
    for band in bands:
        estimate[rows, cols, band.channel] = band.estimate
        lower[rows, cols, band.channel] = band.lower
        upper[rows, cols, band.channel] = band.upper

    result = Reconstruction(
        mask=mask,
        query_pixels=query_pixels,
        estimate=estimate,
        lower=lower,
        upper=upper,
        interps=interps,
        bands=bands,
        maxval=image.maxval,
        timings={
            "fit_seconds": fitted - started,
            "band_seconds": finished - fitted,
            "total_seconds": finished - started,
        },
    )
    logger.info(
        "reconstruction_done",
        shape=f"{image.height}x{image.width}x{image.channels}",
        observed=mask.count,
        queries=len(query_pixels),
        kernel=spec.label(),
        failures=result.failures,
        seconds=round(result.timings["total_seconds"], 3),
    )
    return result


def inpaint(config: RunConfig, image: Image, mask: Mask) -> Reconstruction:
    return reconstruct(config, image, mask)


def superres(config: RunConfig, image: Image, scale: int | None = None) -> Reconstruction:
    """
    Upscale by placing low-res pixels on the fine grid and estimating the rest.

    Low-res pixel (i, j) sits at fine position ((i-1)*scale+1, (j-1)*scale+1).
    """
    scale = scale or config.scale
    if scale not in TESTED_SCALES:
        logger.warning("untested_scale", scale=scale, tested=list(TESTED_SCALES))
    fine, mask = embed(image, scale)
    result = reconstruct(config, fine, mask)
    if config.baselines:
        raw = image if image.scale is Scale.RAW else Image(
            to_raw_values(image.data, image.maxval), maxval=image.maxval
        )
        result.baselines = {name: upsample(raw, scale) for name, upsample in BASELINES.items()}
    return result


def point_estimate(spec: KernelSpec, image: Image, mask: Mask, jitter: float = 0.0) -> np.ndarray:
    """Normalized (h, w, c) estimate without bands, observed pixels passed through."""
    normalized = normalize(image)
    per_channel = []
    for c in range(normalized.channels):
        samples, queries, query_pixels = split_observed(normalized, mask, channel=c)
        per_channel.append(samples)
    factor = factorize(spec, per_channel[0].points, jitter=jitter)
    estimate = normalized.data.copy()
    rows, cols = query_pixels[:, 0] - 1, query_pixels[:, 1] - 1
    for c, samples in enumerate(per_channel):
        estimate[rows, cols, c] = predict_many(fit_with_factor(factor, samples), queries)
    return estimate
