"""
Image-quality metrics: MSE, PSNR, global SSIM and NRMSE.

Images are compared on their own scale. Raw images use M = L = maxval (255);
normalized images use a data range of 2. Multichannel images are compared
over all entries jointly.
"""
import math
from dataclasses import dataclass

import numpy as np
from skimage.metrics import mean_squared_error, normalized_root_mse, peak_signal_noise_ratio

from pixelband.src.errors import InvalidArgumentError, ShapeMismatchError
from pixelband.src.imaging import Image, Scale

NORMALIZED_RANGE = 2.0


def _pair(a, b) -> tuple[np.ndarray, np.ndarray, float]:
    """Float arrays of a pair plus its default data range."""
    data_range = 255.0
    if isinstance(a, Image) or isinstance(b, Image):
        if not (isinstance(a, Image) and isinstance(b, Image)):
            raise InvalidArgumentError("compare two Images or two arrays, not a mix")
        if a.scale is not b.scale:
            raise InvalidArgumentError("images are on different scales")
        data_range = float(a.maxval) if a.scale is Scale.RAW else NORMALIZED_RANGE
        a, b = a.data, b.data
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b, data_range


def mse(a, b) -> float:
    a, b, _ = _pair(a, b)
    return float(mean_squared_error(a, b))


def psnr(a, b, data_range: float | None = None) -> float:
    """10 log10(M^2 / MSE); identical inputs give +inf."""
    a, b, default_range = _pair(a, b)
    data_range = data_range or default_range
    if float(mean_squared_error(a, b)) == 0.0:
        return math.inf
    return float(peak_signal_noise_ratio(a, b, data_range=data_range))


def ssim(a, b, data_range: float | None = None, k1: float = 0.01, k2: float = 0.03) -> float:
    """
    Single-window SSIM over the whole image.

    Uses whole-image means, population variances and covariance, with
    c1 = (k1 L)^2 and c2 = (k2 L)^2. skimage's structural_similarity is the
    windowed variant, so the global formula is evaluated directly.
    """
    a, b, default_range = _pair(a, b)
    L = data_range or default_range
    c1 = (k1 * L) ** 2
    c2 = (k2 * L) ** 2
    mu_a, mu_b = a.mean(), b.mean()
    var_a, var_b = a.var(), b.var()
    cov = ((a - mu_a) * (b - mu_b)).mean()
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return float(num / den)


def nrmse(reference, candidate) -> float:
    """||A - B||_F / ||A||_F with A the ground truth."""
    a, b, _ = _pair(reference, candidate)
    if not np.any(a):
        raise InvalidArgumentError("reference image has zero norm")
    return float(normalized_root_mse(a, b, normalization="euclidean"))


@dataclass(frozen=True)
class MetricReport:
    mse: float
    psnr: float
    ssim: float
    nrmse: float
    scale: str = Scale.RAW.value

    @property
    def psnr_infinite(self) -> bool:
        return math.isinf(self.psnr)

    def to_dict(self) -> dict:
        return {
            "mse": self.mse,
            "psnr": self.psnr,
            "psnr_infinite": self.psnr_infinite,
            "ssim": self.ssim,
            "nrmse": self.nrmse,
            "scale": self.scale,
        }


def compare(reference, candidate, data_range: float | None = None) -> MetricReport:
    """All four metrics of a candidate against its reference."""
    scale = reference.scale.value if isinstance(reference, Image) else Scale.RAW.value
    return MetricReport(
        mse=mse(reference, candidate),
        psnr=psnr(reference, candidate, data_range),
        ssim=ssim(reference, candidate, data_range),
        nrmse=nrmse(reference, candidate),
        scale=scale,
    )
