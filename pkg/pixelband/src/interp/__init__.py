"""
Minimum-norm interpolant fitting and prediction.
"""
from pixelband.src.interp.interpolant import (
    GramFactor,
    Interpolant,
    SampleSet,
    factorize,
    find_duplicates,
    fit,
    fit_with_factor,
    norm_sq,
    predict,
    predict_many,
)
from pixelband.src.interp.jitter import DEFAULT_RELATIVE_GRID, loo_scores, select_jitter

__all__ = [
    "DEFAULT_RELATIVE_GRID",
    "GramFactor",
    "Interpolant",
    "SampleSet",
    "factorize",
    "find_duplicates",
    "fit",
    "fit_with_factor",
    "loo_scores",
    "norm_sq",
    "predict",
    "predict_many",
    "select_jitter",
]
