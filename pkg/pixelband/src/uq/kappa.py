"""
Upper bounds kappa on the squared RKHS norm of the true function.

Three provenances are supported:
- ESTIMATE_PW: the distribution-free bound for band-limited functions,
  mean(y^2) + sqrt(-ln(gamma) / (2n)) + delta0 (+ delta_r for quantized grids)
- MANUAL: a user-supplied value (needed for the Gaussian kernel)
- NORM_FLOOR: the smallest feasible value, the interpolant's own norm

effective_kappa applies the optional (n+1) scaling of the literal algorithm
and floors the result at the interpolant norm so every interval is feasible.
"""
import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
import structlog

from pixelband.src.errors import InvalidArgumentError, KappaFloorWarning
from pixelband.src.interp import Interpolant, SampleSet
from pixelband.src.kernels import KernelKind, KernelSpec

logger = structlog.get_logger()


class KappaMode(Enum):
    """Where a kappa value came from."""
    ESTIMATE_PW = "estimate-pw"
    MANUAL = "manual"
    NORM_FLOOR = "norm-floor"


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise InvalidArgumentError(f"gamma must lie in (0, 1), got {gamma}")


@dataclass(frozen=True)
class KappaBound:
    """A norm bound together with its provenance."""
    kappa: float
    mode: KappaMode
    gamma: float
    delta0: float = 0.0
    delta_r: float = 0.0
    literal_alg1: bool = False

    def __post_init__(self):
        _check_gamma(self.gamma)
        if self.delta0 < 0 or self.delta_r < 0:
            raise InvalidArgumentError("delta0 and delta_r must be nonnegative")
        if self.mode is KappaMode.NORM_FLOOR:
            if self.kappa < 0:
                raise InvalidArgumentError(f"kappa must be nonnegative, got {self.kappa}")
        elif not self.kappa > 0:
            raise InvalidArgumentError(f"kappa must be positive, got {self.kappa}")

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "mode": self.mode.value,
            "gamma": self.gamma,
            "delta0": self.delta0,
            "delta_r": self.delta_r,
            "literal_alg1": self.literal_alg1,
        }


def concentration_term(n: int, gamma: float) -> float:
    """sqrt(-ln(gamma) / (2n)), the finite-sample slack of the estimate."""
    _check_gamma(gamma)
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    return math.sqrt(-math.log(gamma) / (2.0 * n))


def estimate_kappa_pw(
    samples: SampleSet,
    gamma: float,
    delta0: float = 0.0,
    delta_r: float = 0.0,
    literal_alg1: bool = False,
) -> KappaBound:
    """
    Norm bound for a band-limited truth observed at uniform random inputs.

    Args:
        samples: observed pixels, values scaled into [-1, 1]
        gamma: risk probability, the bound holds with probability >= 1 - gamma
        delta0: bound on the truth's energy outside the unit square
        delta_r: quantization correction for grid-restricted inputs

    Returns:
        KappaBound in ESTIMATE_PW mode
    """
    _check_gamma(gamma)
    if delta0 < 0 or delta_r < 0:
        raise InvalidArgumentError("delta0 and delta_r must be nonnegative")
    mean_sq = float(np.mean(samples.values ** 2))
    kappa = mean_sq + concentration_term(samples.n, gamma) + delta0 + delta_r
    logger.debug("kappa_estimated", n=samples.n, mean_sq=mean_sq, kappa=kappa, gamma=gamma)
    return KappaBound(
        kappa=kappa,
        mode=KappaMode.ESTIMATE_PW,
        gamma=gamma,
        delta0=delta0,
        delta_r=delta_r,
        literal_alg1=literal_alg1,
    )


def manual_kappa(kappa: float, gamma: float, literal_alg1: bool = False) -> KappaBound:
    """Wrap a user-supplied bound."""
    return KappaBound(kappa=kappa, mode=KappaMode.MANUAL, gamma=gamma, literal_alg1=literal_alg1)


def norm_floor_kappa(interp: Interpolant, gamma: float) -> KappaBound:
    """The tightest feasible bound: the interpolant's own squared norm."""
    return KappaBound(kappa=interp.norm_sq, mode=KappaMode.NORM_FLOOR, gamma=gamma)


def resolve_kappa(
    mode: KappaMode,
    spec: KernelSpec,
    interp: Interpolant,
    gamma: float,
    kappa: float | None = None,
    delta0: float = 0.0,
    delta_r: float = 0.0,
    literal_alg1: bool = False,
) -> KappaBound:
    """Build the bound for one channel according to the configured mode."""
    if mode is KappaMode.ESTIMATE_PW:
        if spec.kind is not KernelKind.PALEY_WIENER:
            raise InvalidArgumentError("the estimated bound only holds for the Paley-Wiener kernel")
        return estimate_kappa_pw(interp.samples, gamma, delta0, delta_r, literal_alg1)
    if mode is KappaMode.MANUAL:
        if kappa is None:
            raise InvalidArgumentError("manual kappa mode needs a kappa value")
        return manual_kappa(kappa, gamma, literal_alg1)
    return norm_floor_kappa(interp, gamma)


def effective_kappa(bound: KappaBound, interp: Interpolant, n_extended: int | None = None) -> float:
    """
    The kappa actually used by the band.

    With literal_alg1 the bound is scaled by the extended sample count (n + 1).
    The result is floored at the interpolant norm; a KappaFloorWarning is
    emitted when the floor is what decides the value.
    """
    if n_extended is None:
        n_extended = interp.n + 1
    scale = n_extended if bound.literal_alg1 else 1
    scaled = scale * bound.kappa
    if scaled < interp.norm_sq:
        if bound.mode is not KappaMode.NORM_FLOOR:
            logger.warning(
                "kappa_floored",
                kappa=scaled,
                norm_sq=interp.norm_sq,
                mode=bound.mode.value,
            )
            warnings.warn(
                f"kappa={scaled:.6g} is below the interpolant norm {interp.norm_sq:.6g}; "
                "using the norm instead",
                KappaFloorWarning,
                stacklevel=2,
            )
        return interp.norm_sq
    return scaled

