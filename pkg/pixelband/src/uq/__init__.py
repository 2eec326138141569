"""
Confidence bands for the minimum-norm interpolant.
"""
from pixelband.src.uq.band import (
    ConfidenceBand,
    Interval,
    band_over_queries,
    bands_for_channels,
    confidence_interval,
    fit_channels,
    hyperrectangle,
    membership_test,
    multichannel_band,
    quadratic_interval,
)
from pixelband.src.uq.kappa import (
    KappaBound,
    KappaMode,
    concentration_term,
    effective_kappa,
    estimate_kappa_pw,
    manual_kappa,
    norm_floor_kappa,
    resolve_kappa,
)
from pixelband.src.uq.schur import (
    G0_RELATIVE_FLOOR,
    extended_gram,
    extended_inverse,
    extended_norm_sq,
    schur_extend,
)

__all__ = [
    "G0_RELATIVE_FLOOR",
    "ConfidenceBand",
    "Interval",
    "KappaBound",
    "KappaMode",
    "band_over_queries",
    "bands_for_channels",
    "concentration_term",
    "confidence_interval",
    "effective_kappa",
    "estimate_kappa_pw",
    "extended_gram",
    "extended_inverse",
    "extended_norm_sq",
    "fit_channels",
    "hyperrectangle",
    "manual_kappa",
    "membership_test",
    "multichannel_band",
    "norm_floor_kappa",
    "quadratic_interval",
    "resolve_kappa",
    "schur_extend",
]
