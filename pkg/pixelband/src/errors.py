"""
Exception and warning types shared by every pixelband module.

All library errors derive from PixelbandError so the CLI can map them to a
single exit code; argument problems additionally subclass ValueError.
"""
from dataclasses import dataclass


class PixelbandError(Exception):
    """Base class for all pixelband errors."""


class ConfigError(PixelbandError):
    """Run configuration is inconsistent."""


class InvalidArgumentError(PixelbandError, ValueError):
    """An argument is outside its documented domain."""


class ShapeMismatchError(InvalidArgumentError):
    """Two arrays or images that must agree in shape do not."""


class NoDataError(InvalidArgumentError):
    """A mask or sample set contains no observed values."""


class DuplicateInputError(InvalidArgumentError):
    """Two sample inputs coincide, so the Gram matrix is singular."""

    def __init__(self, pairs: list[tuple[int, int]]):
        self.pairs = pairs
        shown = ", ".join(f"({i}, {j})" for i, j in pairs[:10])
        more = f" and {len(pairs) - 10} more" if len(pairs) > 10 else ""
        super().__init__(f"Duplicate sample inputs at index pairs {shown}{more}")


class ConditioningError(PixelbandError):
    """The Gram matrix is not numerically positive definite."""

    def __init__(self, pivot: int, jitter: float):
        self.pivot = pivot
        self.jitter = jitter
        super().__init__(
            f"Cholesky factorization failed at pivot {pivot} (jitter={jitter:g}); "
            "the Gram matrix is numerically singular, raise --jitter"
        )


class NearDuplicateQueryError(PixelbandError):
    """The Schur complement of a query collapsed below the numerical floor."""

    def __init__(self, g0: float, floor: float):
        self.g0 = g0
        self.floor = floor
        super().__init__(
            f"Schur complement g0={g0:.3e} is below the floor {floor:.3e}; "
            "the query numerically coincides with a sample"
        )


class InfeasibleBoundError(PixelbandError):
    """kappa is smaller than the norm of the minimum-norm interpolant."""

    def __init__(self, kappa: float, norm_sq: float):
        self.kappa = kappa
        self.norm_sq = norm_sq
        super().__init__(f"kappa={kappa:.6g} is below the interpolant norm {norm_sq:.6g}")


class NetpbmParseError(PixelbandError):
    """A NetPBM file is malformed."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


@dataclass(frozen=True)
class QueryFailure:
    """A single query that could not be given an interval."""
    index: int
    reason: str

    def to_dict(self) -> dict:
        return {"index": self.index, "reason": self.reason}


class BandComputationError(PixelbandError):
    """Raised in strict mode when any query of a band failed."""

    def __init__(self, failures: list[QueryFailure]):
        self.failures = failures
        first = failures[0]
        super().__init__(
            f"{len(failures)} queries failed; first at index {first.index}: {first.reason}"
        )


class KappaFloorWarning(UserWarning):
    """kappa was raised to the interpolant norm to keep every interval feasible."""
