"""
Reconstruction workflows, bench suites and report writers.
"""
from pixelband.src.pipeline.config import BENCH_SUITES, RunConfig, SuiteConfig, load_run_config
from pixelband.src.pipeline.sgki import (
    Reconstruction,
    inpaint,
    point_estimate,
    reconstruct,
    superres,
)

__all__ = [
    "BENCH_SUITES",
    "Reconstruction",
    "RunConfig",
    "SuiteConfig",
    "inpaint",
    "load_run_config",
    "point_estimate",
    "reconstruct",
    "superres",
]
