from pixelband.src.baselines.resample import (
    BASELINES,
    keys_kernel,
    upsample_bicubic,
    upsample_bilinear,
    upsample_nearest,
)

__all__ = [
    "BASELINES",
    "keys_kernel",
    "upsample_bicubic",
    "upsample_bilinear",
    "upsample_nearest",
]
