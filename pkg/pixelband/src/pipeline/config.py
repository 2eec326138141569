"""
Run and bench configuration.

RunConfig carries the hyper-parameters of one reconstruction. Values are
resolved with the precedence flags > config file > environment
(PIXELBAND_RUN_*) > defaults. Bench suites are declared below so corpus
sizes and seeds can change without touching the suite code.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from dotenv import dotenv_values
from pydantic import ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from pixelband.src.errors import ConfigError
from pixelband.src.interp import DEFAULT_RELATIVE_GRID
from pixelband.src.kernels import KernelKind, KernelSpec
from pixelband.src.uq import KappaMode


class RunConfig(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PIXELBAND_RUN_", extra="forbid")

    # Kernel
    kernel: KernelKind = KernelKind.PALEY_WIENER
    eta: float | None = 50.0
    sigma: float | None = None

    # Norm bound
    gamma: float = 0.1
    kappa_mode: KappaMode | None = None  # None = estimate-pw for pw, manual for gauss
    kappa: float | None = None
    literal_alg1: bool = False
    delta0: float = 0.0
    delta_r: float = 0.0

    # Numerics
    jitter: float = 0.0
    threads: int = 0
    strict: bool = False

    # Workflow
    seed: int | None = 0
    scale: int = 2
    observed_fraction: float = 0.1
    baselines: bool = False
    weights: bool = False
    weight_power: float = 0.25
    out_dir: Path | None = None

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.kernel is KernelKind.PALEY_WIENER and not (self.eta and self.eta > 0):
            raise ValueError("the pw kernel needs eta > 0")
        if self.kernel is KernelKind.GAUSSIAN and not (self.sigma and self.sigma > 0):
            raise ValueError("the gauss kernel needs sigma > 0")
        mode = self.resolved_kappa_mode
        if mode is KappaMode.MANUAL and self.kappa is None:
            raise ValueError("kappa_mode=manual requires kappa")
        if mode is KappaMode.ESTIMATE_PW and self.kernel is not KernelKind.PALEY_WIENER:
            raise ValueError("kappa_mode=estimate-pw requires the pw kernel")
        if self.kappa is not None and self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.jitter < 0 or self.delta0 < 0 or self.delta_r < 0:
            raise ValueError("jitter, delta0 and delta_r must be nonnegative")
        if self.scale < 2:
            raise ValueError("scale must be at least 2")
        if not 0.0 < self.observed_fraction <= 1.0:
            raise ValueError("observed_fraction must lie in (0, 1]")
        return self

    @property
    def resolved_kappa_mode(self) -> KappaMode:
        if self.kappa_mode is not None:
            return self.kappa_mode
        if self.kernel is KernelKind.PALEY_WIENER:
            return KappaMode.ESTIMATE_PW
        return KappaMode.MANUAL

    def kernel_spec(self) -> KernelSpec:
        if self.kernel is KernelKind.PALEY_WIENER:
            return KernelSpec.paley_wiener(self.eta)
        return KernelSpec.gaussian(self.sigma)

    def to_dict(self) -> dict:
        data = self.model_dump(mode="json")
        data["kappa_mode"] = self.resolved_kappa_mode.value
        return data


def _read_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = dotenv_values(path)
    return {k.strip().lower().replace("-", "_"): v for k, v in values.items() if v is not None}


def load_run_config(config_path: str | Path | None = None, **flags: Any) -> RunConfig:
    """
    Build a RunConfig from flags, an optional key=value file and the environment.

    Flags that are None are treated as unset.

    Raises:
        ConfigError: unknown keys or values that fail validation
    """
    values: dict[str, Any] = {}
    if config_path is not None:
        values.update(_read_config_file(config_path))
    values.update({k: v for k, v in flags.items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(problems) from e


@dataclass
class SuiteConfig:
    """One bench suite."""
    name: str
    description: str
    count: int
    resolution: int
    observed_fraction: float = 0.1
    stride: int = 1
    truth_eta: float = 50.0
    etas: list[float] = field(default_factory=lambda: [50.0])
    gamma: float = 0.1
    jitter: float = 0.0
    # relative candidates for a per-run leave-one-out jitter; overrides jitter
    jitter_grid: list[float] | None = None
    seed: int = 0
    extra: dict[str, Any] = field(default_factory=dict)


BENCH_SUITES: dict[str, SuiteConfig] = {
    "inpaint-synth": SuiteConfig(
        name="inpaint-synth",
        description="Band-limited images, 10% of pixels observed",
        count=100,
        resolution=50,
        observed_fraction=0.1,
        jitter=1e-6,
        seed=1000,
    ),
    "superres-synth": SuiteConfig(
        name="superres-synth",
        description="Band-limited images subsampled x2 and restored",
        count=20,
        resolution=100,
        stride=2,
        jitter=1e-4,
        seed=2000,
    ),
    "eta-sweep": SuiteConfig(
        name="eta-sweep",
        description="Kernel eta against a fixed truth eta of 50",
        count=10,
        resolution=50,
        observed_fraction=0.1,
        etas=[10.0, 25.0, 50.0, 75.0, 100.0, 150.0],
        jitter_grid=list(DEFAULT_RELATIVE_GRID),
        seed=3000,
    ),
    "timing": SuiteConfig(
        name="timing",
        description="Per-query cost of dense, materialized Schur and fast intervals",
        count=1,
        resolution=64,
        jitter=1e-3,
        seed=4000,
        extra={
            "removed_fractions": [0.05, 0.10, 0.15, 0.20, 0.25],
            "naive_queries": 20,
        },
    ),
    "coverage": SuiteConfig(
        name="coverage",
        description="Empirical reliability of the band over seeded truths",
        count=200,
        resolution=30,
        observed_fraction=0.1,
        gamma=0.1,
        seed=5000,
        extra={"oversample": 4},
    ),
}
