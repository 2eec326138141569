"""
Image encoding, masks, synthetic truths, NetPBM I/O and renderings.
"""
from pixelband.src.imaging.grid import (
    Mask,
    circle_mask,
    circle_mask_for_count,
    embed,
    embed_mask,
    grid_coords,
    pixel_indices,
    random_mask,
    split_observed,
    subsample,
)
from pixelband.src.imaging.image import (
    MAX_MAXVAL,
    Image,
    Scale,
    denormalize,
    normalize,
    to_raw_values,
)
from pixelband.src.imaging.netpbm import encode_netpbm, parse_netpbm, read_netpbm, write_netpbm
from pixelband.src.imaging.render import (
    relative_uncertainty,
    render_uncertainty,
    render_weights,
    uncertainty_map,
    weight_map,
)
from pixelband.src.imaging.synth import (
    SyntheticTruth,
    eval_truth,
    eval_truth_many,
    quantization_delta,
    read_truth,
    synth_pw_image,
    truth_norm_sq,
    write_truth,
)

__all__ = [
    "MAX_MAXVAL",
    "Image",
    "Mask",
    "Scale",
    "SyntheticTruth",
    "circle_mask",
    "circle_mask_for_count",
    "denormalize",
    "embed",
    "embed_mask",
    "encode_netpbm",
    "eval_truth",
    "eval_truth_many",
    "grid_coords",
    "normalize",
    "parse_netpbm",
    "pixel_indices",
    "quantization_delta",
    "random_mask",
    "read_netpbm",
    "read_truth",
    "relative_uncertainty",
    "render_uncertainty",
    "render_weights",
    "split_observed",
    "subsample",
    "synth_pw_image",
    "to_raw_values",
    "truth_norm_sq",
    "uncertainty_map",
    "weight_map",
    "write_netpbm",
    "write_truth",
]
