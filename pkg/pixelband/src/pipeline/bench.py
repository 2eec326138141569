"""
Bench suites over seeded synthetic corpora.

Each suite returns a per-run table and an aggregated summary table; the
summary is what gets rendered to markdown. Suites are declared in
pipeline.config.BENCH_SUITES.
"""
import time
from collections.abc import Callable
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd
import structlog
from scipy import linalg

from pixelband.src.errors import ConditioningError, InvalidArgumentError
from pixelband.src.imaging import (
    Image,
    Mask,
    normalize,
    quantization_delta,
    random_mask,
    split_observed,
    subsample,
    synth_pw_image,
    to_raw_values,
    truth_norm_sq,
)
from pixelband.src.interp import fit, predict_many, select_jitter
from pixelband.src.kernels import KernelSpec
from pixelband.src.metrics import compare
from pixelband.src.pipeline.config import BENCH_SUITES, RunConfig, SuiteConfig
from pixelband.src.pipeline.reports import markdown_table, write_csv
from pixelband.src.pipeline.sgki import point_estimate, reconstruct, superres
from pixelband.src.uq import (
    band_over_queries,
    confidence_interval,
    effective_kappa,
    estimate_kappa_pw,
    extended_gram,
    extended_inverse,
)

logger = structlog.get_logger()

BENCH_SCHEMA = "bench/v1"


@dataclass
class BenchResult:
    suite: str
    runs: pd.DataFrame
    summary: pd.DataFrame

    def write(self, out_dir: Path) -> list[Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        md = out_dir / f"{self.suite}.md"
        md.write_text(markdown_table(self.summary), encoding="utf-8")
        return [
            write_csv(self.runs, out_dir / f"{self.suite}_runs.csv", BENCH_SCHEMA),
            write_csv(self.summary, out_dir / f"{self.suite}.csv", BENCH_SCHEMA),
            md,
        ]


def _raw(values: np.ndarray) -> Image:
    return Image(to_raw_values(values))


def _metric_row(truth: Image, estimate: np.ndarray) -> dict:
    return compare(_raw(truth.data), _raw(estimate)).to_dict()


def _run_config(suite: SuiteConfig, eta: float, threads: int | None) -> RunConfig:
    return RunConfig(eta=eta, gamma=suite.gamma, jitter=suite.jitter, threads=threads or 0)


def _average(runs: pd.DataFrame, by: str, columns: list[str]) -> pd.DataFrame:
    """
    Group means, with PSNR averaged over lossy runs only.

    A lossless run has infinite PSNR and would swamp the mean, so those runs
    are counted in perfect_runs instead. A group with no lossy run keeps
    PSNR = inf.
    """
    summary = runs.groupby(by, as_index=False)[columns].mean()
    if "psnr" in columns:
        perfect = runs["psnr_infinite"].astype(bool)
        lossy_psnr = runs[~perfect].groupby(by)["psnr"].mean()
        summary["psnr"] = summary[by].map(lossy_psnr).fillna(np.inf)
        summary["perfect_runs"] = summary[by].map(perfect.groupby(runs[by]).sum()).astype(int)
    return summary


def bench_inpaint(suite: SuiteConfig, threads: int | None = None) -> BenchResult:
    rows = []
    config = _run_config(suite, suite.etas[0], threads)
    for k in range(suite.count):
        truth_image, _ = synth_pw_image(suite.truth_eta, suite.resolution, seed=suite.seed + k)
        mask = random_mask(suite.resolution, suite.resolution, suite.observed_fraction,
                           seed=suite.seed + suite.count + k)
        result = reconstruct(config, truth_image, mask)
        covered = result.covers(truth_image.data)
        rows.append({
            "run": k,
            "method": "sgki-pw",
            **_metric_row(truth_image, result.estimate),
            "pixel_coverage": float(covered.mean()) if covered.size else 1.0,
            "full_coverage": bool(covered.all()),
            "seconds": result.timings["total_seconds"],
        })
    runs = pd.DataFrame(rows)
    summary = _average(
        runs, "method", ["psnr", "ssim", "nrmse", "pixel_coverage", "full_coverage"]
    )
    return BenchResult(suite.name, runs, summary)


def bench_superres(suite: SuiteConfig, threads: int | None = None) -> BenchResult:
    rows = []
    config = _run_config(suite, suite.etas[0], threads).model_copy(update={"baselines": True})
    for k in range(suite.count):
        truth_image, _ = synth_pw_image(suite.truth_eta, suite.resolution, seed=suite.seed + k)
        low = subsample(truth_image, suite.stride)
        result = superres(config, low, suite.stride)
        rows.append({"run": k, "method": "sgki-pw", **_metric_row(truth_image, result.estimate)})
        reference = _raw(truth_image.data)
        for name, image in result.baselines.items():
            rows.append({"run": k, "method": name, **compare(reference, image).to_dict()})
    runs = pd.DataFrame(rows)
    summary = _average(runs, "method", ["psnr", "ssim", "nrmse"])
    return BenchResult(suite.name, runs, summary)


def _suite_jitter(suite: SuiteConfig, spec: KernelSpec, image: Image, mask: Mask) -> float:
    if not suite.jitter_grid:
        return suite.jitter
    samples, _, _ = split_observed(normalize(image), mask)
    return select_jitter(spec, samples, suite.jitter_grid)


def bench_eta_sweep(suite: SuiteConfig, threads: int | None = None) -> BenchResult:
    """
    Point-estimate quality as the kernel eta moves away from the truth's.

    With a jitter grid on the suite, each (image, eta) pair gets its own
    jitter by leave-one-out error.
    """
    rows = []
    for k in range(suite.count):
        truth_image, _ = synth_pw_image(suite.truth_eta, suite.resolution, seed=suite.seed + k)
        mask = random_mask(suite.resolution, suite.resolution, suite.observed_fraction,
                           seed=suite.seed + suite.count + k)
        for eta in suite.etas:
            spec = KernelSpec.paley_wiener(eta)
            jitter = _suite_jitter(suite, spec, truth_image, mask)
            try:
                estimate = point_estimate(spec, truth_image, mask, jitter)
            except ConditioningError as e:
                logger.warning("eta_sweep_run_skipped", run=k, eta=eta, pivot=e.pivot)
                continue
            rows.append({
                "run": k,
                "eta": eta,
                "jitter": jitter,
                **_metric_row(truth_image, estimate),
            })
    runs = pd.DataFrame(rows)
    summary = _average(runs, "eta", ["psnr", "ssim", "nrmse"])
    return BenchResult(suite.name, runs, summary)


def _per_query_seconds(fn: Callable[[np.ndarray], object], queries: np.ndarray) -> float:
    started = time.perf_counter()
    for x0 in queries:
        fn(x0)
    return (time.perf_counter() - started) / max(len(queries), 1)


def bench_timing(suite: SuiteConfig, threads: int | None = None) -> BenchResult:
    """
    Per-query cost of the three interval paths at several removal fractions.

    The fast interval is timed on every query. A dense (n+1) x (n+1)
    inversion costs about a second at n = 3700, so the dense and materialized
    paths are timed on the first "naive_queries" queries only; their
    per-query mean is scaled by the query count in dense_seconds_extrapolated.
    """
    r = suite.resolution
    subset = int(suite.extra.get("naive_queries", 20))
    spec = KernelSpec.paley_wiener(suite.etas[0])
    truth_image, _ = synth_pw_image(suite.truth_eta, r, seed=suite.seed)
    rows = []
    for removed in suite.extra.get("removed_fractions", [0.1]):
        mask = random_mask(r, r, 1.0 - removed, seed=suite.seed + int(removed * 1000))
        samples, queries, _ = split_observed(truth_image, mask)

        started = time.perf_counter()
        interp = fit(spec, samples, jitter=suite.jitter)
        fit_seconds = time.perf_counter() - started

        started = time.perf_counter()
        predict_many(interp, queries)
        estimate_seconds = time.perf_counter() - started

        kappa_eff = effective_kappa(estimate_kappa_pw(samples, suite.gamma), interp)
        started = time.perf_counter()
        band_over_queries(interp, kappa_eff, queries, threads=threads)
        band_seconds = time.perf_counter() - started

        sample = queries[:subset]
        y = interp.samples.values

        def dense(x0):
            inv = linalg.inv(extended_gram(interp, x0), check_finite=False)
            return inv[0, 0], inv[1:, 0] @ y, y @ inv[1:, 1:] @ y

        dense_q = _per_query_seconds(dense, sample)
        schur_q = _per_query_seconds(lambda x0: extended_inverse(interp, x0), sample)
        fast_q = _per_query_seconds(lambda x0: confidence_interval(interp, kappa_eff, x0), queries)
        rows.append({
            "removed_fraction": removed,
            "observed": samples.n,
            "queries": len(queries),
            "timed_queries": len(sample),
            "dense_seconds_extrapolated": dense_q * len(queries),
            "dense_per_query": dense_q,
            "schur_per_query": schur_q,
            "fast_per_query": fast_q,
            "speedup_schur": dense_q / schur_q,
            "speedup_fast": dense_q / fast_q,
            "fit_seconds": fit_seconds,
            "estimate_seconds": estimate_seconds,
            "estimate_per_pixel": estimate_seconds / max(len(queries), 1),
            "band_seconds": band_seconds,
            "band_per_pixel": band_seconds / max(len(queries), 1),
        })
        logger.info("timing_row", removed=removed, observed=samples.n,
                    speedup_fast=round(dense_q / fast_q, 2))
    runs = pd.DataFrame(rows)
    return BenchResult(suite.name, runs, runs.copy())


def bench_coverage(suite: SuiteConfig, threads: int | None = None) -> BenchResult:
    """
    Fraction of seeded truths whose band covers f_* at every missing pixel.

    Also reports how often the truth norm stays under kappa, and the grid
    quantization correction delta_r the run would need.
    """
    r = suite.resolution
    spec = KernelSpec.paley_wiener(suite.etas[0])
    oversample = int(suite.extra.get("oversample", 4))
    rows = []
    for k in range(suite.count):
        truth_image, truth = synth_pw_image(suite.truth_eta, r, seed=suite.seed + k)
        mask = random_mask(r, r, suite.observed_fraction, seed=suite.seed + suite.count + k)
        samples, queries, _ = split_observed(truth_image, mask)
        try:
            interp = fit(spec, samples, jitter=suite.jitter)
        except ConditioningError as e:
            logger.warning("coverage_run_skipped", run=k, pivot=e.pivot)
            rows.append({"run": k, "skipped": True})
            continue
        bound = estimate_kappa_pw(samples, suite.gamma)
        band = band_over_queries(interp, effective_kappa(bound, interp), queries, threads=threads)
        covered = band.contains(truth(queries))
        norm_sq = truth_norm_sq(truth)
        rows.append({
            "run": k,
            "skipped": False,
            "covered": bool(covered.all()),
            "pixel_coverage": float(covered.mean()) if covered.size else 1.0,
            "kappa": bound.kappa,
            "truth_norm_sq": norm_sq,
            "norm_within_kappa": norm_sq <= bound.kappa,
            "delta_r": quantization_delta(truth, r, r, oversample),
            "observed": samples.n,
        })
    runs = pd.DataFrame(rows)
    done = runs[~runs["skipped"].astype(bool)]

    def mean(column: str) -> float:
        return float(done[column].astype(float).mean()) if len(done) else float("nan")

    summary = pd.DataFrame([{
        "runs": len(done),
        "skipped": int(runs["skipped"].sum()),
        "reliability": mean("covered"),
        "target": 1.0 - suite.gamma,
        "pixel_coverage": mean("pixel_coverage"),
        "norm_within_kappa": mean("norm_within_kappa"),
        "mean_delta_r": mean("delta_r"),
    }])
    return BenchResult(suite.name, runs, summary)


SUITE_RUNNERS: dict[str, Callable[[SuiteConfig, int | None], BenchResult]] = {
    "inpaint-synth": bench_inpaint,
    "superres-synth": bench_superres,
    "eta-sweep": bench_eta_sweep,
    "timing": bench_timing,
    "coverage": bench_coverage,
}


def run_suite(
    name: str,
    threads: int | None = None,
    count: int | None = None,
    seed: int | None = None,
    resolution: int | None = None,
) -> BenchResult:
    """Run a declared suite, optionally overriding its size and seed."""
    if name not in BENCH_SUITES:
        raise InvalidArgumentError(f"unknown suite {name!r}; choose from {sorted(BENCH_SUITES)}")
    suite = BENCH_SUITES[name]
    overrides = {"count": count, "seed": seed, "resolution": resolution}
    suite = replace(suite, **{k: v for k, v in overrides.items() if v is not None})

    logger.info("bench_started", suite=name, count=suite.count, resolution=suite.resolution)
    started = time.perf_counter()
    result = SUITE_RUNNERS[name](suite, threads)
    logger.info("bench_finished", suite=name, seconds=round(time.perf_counter() - started, 2))
    return result
