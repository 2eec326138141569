"""
Simultaneous confidence intervals for interpolated pixels.

For a query x0 the interval [I1, I2] collects every y0 for which the
minimum-norm interpolant of the samples plus (x0, y0) has squared norm at
most kappa. Solving that constraint gives the closed form

    f(x0) +/- sqrt(g0 * (kappa - norm_sq))

which is what the fast path computes. quadratic_interval solves the same
constraint as the printed quadratic a0 y0^2 + b0 y0 + c0 = 0 from a
materialized extended inverse and exists to cross-check the closed form.
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import structlog

from pixelband.src.config import get_settings, resolve_threads
from pixelband.src.errors import (
    BandComputationError,
    InfeasibleBoundError,
    InvalidArgumentError,
    NearDuplicateQueryError,
    QueryFailure,
    ShapeMismatchError,
)
from pixelband.src.interp import (
    Interpolant,
    SampleSet,
    factorize,
    fit_with_factor,
    predict,
)
from pixelband.src.kernels import KernelSpec
from pixelband.src.uq.kappa import KappaBound, KappaMode, effective_kappa, resolve_kappa
from pixelband.src.uq.schur import extended_inverse, extended_norm_sq, schur_extend

logger = structlog.get_logger()

# |y0 - y_k| tolerance when a query coincides with a sample
COINCIDENT_VALUE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Interval:
    """Point estimate and confidence interval at one query."""
    query: tuple[float, ...]
    estimate: float
    lower: float
    upper: float
    g0: float
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "query": list(self.query),
            "estimate": self.estimate,
            "lower": self.lower,
            "upper": self.upper,
            "g0": self.g0,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class ConfidenceBand:
    """
    Intervals for a list of queries sharing one fitted interpolant.

    Stored column-wise; failed queries keep their point estimate and carry
    NaN bounds, with the reason listed in failures.
    """
    queries: np.ndarray      # (m, d)
    estimate: np.ndarray     # (m,)
    lower: np.ndarray
    upper: np.ndarray
    g0: np.ndarray
    degenerate: np.ndarray   # bool
    kappa_used: float
    channel: int = 0
    failures: tuple[QueryFailure, ...] = ()
    kappa_bound: KappaBound | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return self.queries.shape[0]

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def failed(self) -> np.ndarray:
        mask = np.zeros(len(self), dtype=bool)
        mask[[f.index for f in self.failures]] = True
        return mask

    def interval(self, index: int) -> Interval:
        return Interval(
            query=tuple(float(c) for c in self.queries[index]),
            estimate=float(self.estimate[index]),
            lower=float(self.lower[index]),
            upper=float(self.upper[index]),
            g0=float(self.g0[index]),
            degenerate=bool(self.degenerate[index]),
        )

    @property
    def intervals(self) -> list[Interval]:
        return [self.interval(i) for i in range(len(self))]

    def contains(self, values: np.ndarray, slack: float = 0.0) -> np.ndarray:
        """Per-query containment of the given values (False where the query failed)."""
        with np.errstate(invalid="ignore"):
            return (self.lower - slack <= values) & (values <= self.upper + slack)

    def summary(self) -> dict:
        finite = np.isfinite(self.width)
        return {
            "channel": self.channel,
            "queries": len(self),
            "failures": len(self.failures),
            "degenerate": int(self.degenerate.sum()),
            "kappa_used": self.kappa_used,
            "mean_width": float(self.width[finite].mean()) if finite.any() else 0.0,
            "max_width": float(self.width[finite].max()) if finite.any() else 0.0,
        }


def _check_feasible(interp: Interpolant, kappa_eff: float) -> None:
    if kappa_eff < interp.norm_sq:
        raise InfeasibleBoundError(kappa=kappa_eff, norm_sq=interp.norm_sq)


def _degenerate(interp: Interpolant, x0, index: int) -> Interval:
    value = float(interp.samples.values[index])
    return Interval(
        query=tuple(float(c) for c in x0),
        estimate=value,
        lower=value,
        upper=value,
        g0=0.0,
        degenerate=True,
    )


def membership_test(interp: Interpolant, kappa_eff: float, x0, y0: float) -> bool:
    """Whether (x0, y0) can be interpolated together with the samples within kappa."""
    x0 = np.asarray(x0, dtype=np.float64)
    index = interp.coincident_sample(x0)
    if index is not None:
        return abs(y0 - float(interp.samples.values[index])) <= COINCIDENT_VALUE_TOLERANCE
    return extended_norm_sq(interp, x0, y0) <= kappa_eff


def confidence_interval(interp: Interpolant, kappa_eff: float, x0) -> Interval:
    """
    Point estimate and interval at one query.

    Queries that coincide with a sample return the zero-width interval at the
    observed value. Bounds are not clamped to the pixel range.

    Raises:
        InfeasibleBoundError: kappa_eff < norm_sq
        NearDuplicateQueryError: x0 numerically coincides with a sample
    """
    _check_feasible(interp, kappa_eff)
    x0 = np.asarray(x0, dtype=np.float64)
    index = interp.coincident_sample(x0)
    if index is not None:
        return _degenerate(interp, x0, index)

    g0, mean, _ = schur_extend(interp, x0)
    half = math.sqrt(g0 * (kappa_eff - interp.norm_sq))
    return Interval(
        query=tuple(float(c) for c in x0),
        estimate=mean,
        lower=mean - half,
        upper=mean + half,
        g0=g0,
    )


def quadratic_interval(interp: Interpolant, kappa_eff: float, x0) -> Interval:
    """
    The same interval from the roots of a0 y0^2 + b0 y0 + c0 = 0.

    K0^-1 is partitioned as [[c, b^T], [b, A]] with a0 = c, b0 = 2 b^T y and
    c0 = y^T A y - kappa_eff. kappa_eff already includes any (n+1) scaling.
    """
    _check_feasible(interp, kappa_eff)
    x0 = np.asarray(x0, dtype=np.float64)
    index = interp.coincident_sample(x0)
    if index is not None:
        return _degenerate(interp, x0, index)

    inv = extended_inverse(interp, x0)
    y = interp.samples.values
    a0 = inv[0, 0]
    b0 = 2.0 * float(inv[1:, 0] @ y)
    c0 = float(y @ inv[1:, 1:] @ y) - kappa_eff
    disc = max(b0 * b0 - 4.0 * a0 * c0, 0.0)
    root = math.sqrt(disc)
    lower = (-b0 - root) / (2.0 * a0)
    upper = (-b0 + root) / (2.0 * a0)
    return Interval(
        query=tuple(float(c) for c in x0),
        estimate=(lower + upper) / 2.0,
        lower=lower,
        upper=upper,
        g0=1.0 / a0,
    )


def _band_chunk(interp: Interpolant, kappa_eff: float, queries: np.ndarray, start: int):
    m = queries.shape[0]
    estimate = np.empty(m)
    lower = np.empty(m)
    upper = np.empty(m)
    g0 = np.empty(m)
    degenerate = np.zeros(m, dtype=bool)
    failures = []
    for i in range(m):
        try:
            iv = confidence_interval(interp, kappa_eff, queries[i])
        except NearDuplicateQueryError as e:
            failures.append(QueryFailure(index=start + i, reason=str(e)))
            estimate[i] = predict(interp, queries[i])
            lower[i] = upper[i] = np.nan
            g0[i] = e.g0
            continue
        estimate[i] = iv.estimate
        lower[i] = iv.lower
        upper[i] = iv.upper
        g0[i] = iv.g0
        degenerate[i] = iv.degenerate
    return estimate, lower, upper, g0, degenerate, failures


def band_over_queries(
    interp: Interpolant,
    kappa_eff: float,
    queries,
    threads: int | None = None,
    strict: bool = False,
    channel: int = 0,
    chunk_size: int | None = None,
    kappa_bound: KappaBound | None = None,
) -> ConfidenceBand:
    """
    Confidence intervals for every query, in input order.

    Queries are split into contiguous chunks processed by a thread pool; each
    worker only reads the shared factorization. Results are identical to a
    sequential loop over confidence_interval.

    Args:
        interp: fitted interpolant
        kappa_eff: effective bound (see effective_kappa)
        queries: (m, d) query inputs
        threads: worker count, None/0 = settings default
        strict: raise BandComputationError if any query fails
        channel: color channel the band belongs to

    Returns:
        ConfidenceBand with one entry per query
    """
    _check_feasible(interp, kappa_eff)
    queries = np.asarray(queries, dtype=np.float64).reshape(-1, interp.spec.dim)
    m = queries.shape[0]
    chunk_size = chunk_size or get_settings().band_chunk_size
    started = time.perf_counter()

    starts = list(range(0, m, chunk_size))
    workers = min(resolve_threads(threads), max(len(starts), 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda s: _band_chunk(interp, kappa_eff, queries[s:s + chunk_size], s),
                starts,
            ))
    else:
        parts = [_band_chunk(interp, kappa_eff, queries[s:s + chunk_size], s) for s in starts]

    def stack(k: int, dtype=np.float64) -> np.ndarray:
        if not parts:
            return np.empty(0, dtype=dtype)
        return np.concatenate([p[k] for p in parts])

    failures = tuple(f for p in parts for f in p[5])
    band = ConfidenceBand(
        queries=queries,
        estimate=stack(0),
        lower=stack(1),
        upper=stack(2),
        g0=stack(3),
        degenerate=stack(4, dtype=bool),
        kappa_used=kappa_eff,
        channel=channel,
        failures=failures,
        kappa_bound=kappa_bound,
    )

    logger.info(
        "band_computed",
        channel=channel,
        queries=m,
        failures=len(failures),
        workers=workers,
        seconds=round(time.perf_counter() - started, 3),
    )
    if failures:
        logger.warning("band_queries_failed", channel=channel, count=len(failures),
                       first_index=failures[0].index)
        if strict:
            raise BandComputationError(list(failures))
    return band


def _check_shared_inputs(per_channel: list[SampleSet]) -> None:
    if not per_channel:
        raise InvalidArgumentError("at least one channel is required")
    reference = per_channel[0].points
    for c, samples in enumerate(per_channel[1:], start=1):
        if samples.points.shape != reference.shape or not np.array_equal(samples.points, reference):
            raise ShapeMismatchError(f"channel {c} does not share the inputs of channel 0")


def fit_channels(
    spec: KernelSpec,
    per_channel: list[SampleSet],
    jitter: float = 0.0,
) -> list[Interpolant]:
    """One interpolant per channel; the Gram factorization is computed once."""
    _check_shared_inputs(per_channel)
    factor = factorize(spec, per_channel[0].points, jitter=jitter)
    return [fit_with_factor(factor, samples) for samples in per_channel]


def multichannel_band(
    spec: KernelSpec,
    per_channel: list[SampleSet],
    gamma: float,
    queries,
    kappa_mode: KappaMode = KappaMode.ESTIMATE_PW,
    kappa: float | None = None,
    delta0: float = 0.0,
    delta_r: float = 0.0,
    literal_alg1: bool = False,
    jitter: float = 0.0,
    threads: int | None = None,
    strict: bool = False,
) -> list[ConfidenceBand]:
    """
    Bands for vector-valued outputs, one per channel.

    The per-query confidence region is the hyperrectangle of the channel
    intervals (see hyperrectangle).
    """
    interps = fit_channels(spec, per_channel, jitter=jitter)
    return bands_for_channels(
        interps, gamma, queries,
        kappa_mode=kappa_mode, kappa=kappa, delta0=delta0, delta_r=delta_r,
        literal_alg1=literal_alg1, threads=threads, strict=strict,
    )


def bands_for_channels(
    interps: list[Interpolant],
    gamma: float,
    queries,
    kappa_mode: KappaMode = KappaMode.ESTIMATE_PW,
    kappa: float | None = None,
    delta0: float = 0.0,
    delta_r: float = 0.0,
    literal_alg1: bool = False,
    threads: int | None = None,
    strict: bool = False,
) -> list[ConfidenceBand]:
    """Resolve kappa and compute the band separately for each fitted channel."""
    bands = []
    for c, interp in enumerate(interps):
        bound = resolve_kappa(
            kappa_mode, interp.spec, interp, gamma,
            kappa=kappa, delta0=delta0, delta_r=delta_r, literal_alg1=literal_alg1,
        )
        kappa_eff = effective_kappa(bound, interp)
        bands.append(band_over_queries(
            interp, kappa_eff, queries,
            threads=threads, strict=strict, channel=c, kappa_bound=bound,
        ))
    return bands


def hyperrectangle(bands: list[ConfidenceBand], index: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel (lower, upper) corners of the confidence region at one query."""
    lower = np.array([band.lower[index] for band in bands])
    upper = np.array([band.upper[index] for band in bands])
    return lower, upper
