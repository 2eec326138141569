"""
Artifact writers: images, versioned CSV tables, markdown and summary.json.
"""
import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from pixelband.src.imaging import Image, render_uncertainty, render_weights, write_netpbm
from pixelband.src.metrics import MetricReport
from pixelband.src.pipeline.config import RunConfig
from pixelband.src.pipeline.sgki import Reconstruction

logger = structlog.get_logger()

INTERVALS_SCHEMA = "intervals/v1"
FAILURES_SCHEMA = "failures/v1"
METRICS_SCHEMA = "metrics/v1"
INTERVAL_COLUMNS = ["i", "j", "channel", "estimate", "lower", "upper", "width"]


def image_suffix(image: Image) -> str:
    return ".pgm" if image.channels == 1 else ".ppm"


def intervals_frame(result: Reconstruction) -> pd.DataFrame:
    """One row per (missing pixel, channel), 1-based pixel indices."""
    frames = []
    for band in result.bands:
        frames.append(pd.DataFrame({
            "i": result.query_pixels[:, 0].astype(int),
            "j": result.query_pixels[:, 1].astype(int),
            "channel": band.channel,
            "estimate": band.estimate,
            "lower": band.lower,
            "upper": band.upper,
            "width": band.width,
        }))
    if not frames:
        return pd.DataFrame(columns=INTERVAL_COLUMNS)
    return pd.concat(frames, ignore_index=True)[INTERVAL_COLUMNS]


def failures_frame(result: Reconstruction) -> pd.DataFrame:
    rows = []
    for band in result.bands:
        for failure in band.failures:
            i, j = result.query_pixels[failure.index]
            rows.append({
                "i": int(i),
                "j": int(j),
                "channel": band.channel,
                **failure.to_dict(),
            })
    return pd.DataFrame(rows, columns=["i", "j", "channel", "index", "reason"])


def write_csv(frame: pd.DataFrame, path: Path, schema: str) -> Path:
    """UTF-8 CSV with a header row, preceded by a '# schema=' comment line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(f"# schema={schema}\n")
        frame.to_csv(f, index=False, float_format="%.17g")
    return path


def read_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def _cell(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.4f}"
    return str(value)


def markdown_table(frame: pd.DataFrame) -> str:
    """Markdown rendering with the same rows and columns as the CSV."""
    header = "| " + " | ".join(str(c) for c in frame.columns) + " |"
    rule = "|" + "|".join("---" for _ in frame.columns) + "|"
    body = [
        "| " + " | ".join(_cell(v) for v in row) + " |"
        for row in frame.itertuples(index=False)
    ]
    return "\n".join([header, rule, *body]) + "\n"


def metrics_frame(reports: dict[str, MetricReport]) -> pd.DataFrame:
    return pd.DataFrame([{"method": name, **report.to_dict()} for name, report in reports.items()])


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_json(data: dict, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=_json_default), encoding="utf-8")
    return path


def build_summary(command: str, config: RunConfig, result: Reconstruction, **extra) -> dict:
    h, w = result.shape
    return {
        "command": command,
        "config": config.to_dict(),
        "height": h,
        "width": w,
        "channels": result.channels,
        "observed": result.mask.count,
        "queries": len(result.query_pixels),
        "failures": result.failures,
        "channel_bands": [
            {
                **band.summary(),
                "norm_sq": result.interps[band.channel].norm_sq,
                "kappa_bound": band.kappa_bound.to_dict() if band.kappa_bound else None,
            }
            for band in result.bands
        ],
        "timings": result.timings,
        **extra,
    }


def write_reconstruction(
    command: str,
    config: RunConfig,
    result: Reconstruction,
    out_dir: Path,
    metrics: dict[str, MetricReport] | None = None,
) -> list[Path]:
    """Write every artifact of an inpaint or superres run and return their paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    h, w = result.shape
    written = []

    estimate = result.estimate_image()
    suffix = image_suffix(estimate)
    written.append(write_netpbm(estimate, out_dir / f"estimate{suffix}"))
    written.append(write_netpbm(result.lower_image(), out_dir / f"lower{suffix}"))
    written.append(write_netpbm(result.upper_image(), out_dir / f"upper{suffix}"))
    written.append(write_netpbm(
        render_uncertainty(result.bands, result.query_pixels, h, w),
        out_dir / "uncertainty.pgm",
    ))
    if config.weights:
        for c, interp in enumerate(result.interps):
            written.append(write_netpbm(
                render_weights(interp, result.mask, config.weight_power),
                out_dir / f"weights_c{c}.pgm",
            ))

    written.append(write_csv(intervals_frame(result), out_dir / "intervals.csv", INTERVALS_SCHEMA))
    if result.failures:
        written.append(write_csv(failures_frame(result), out_dir / "failures.csv", FAILURES_SCHEMA))

    for name, image in result.baselines.items():
        written.append(write_netpbm(image, out_dir / f"{name}{image_suffix(image)}"))
    if metrics:
        frame = metrics_frame(metrics)
        written.append(write_csv(frame, out_dir / "metrics.csv", METRICS_SCHEMA))
        md = out_dir / "metrics.md"
        md.write_text(markdown_table(frame), encoding="utf-8")
        written.append(md)

    summary = build_summary(
        command, config, result,
        artifacts=[p.name for p in written] + ["summary.json"],
        metrics={k: v.to_dict() for k, v in (metrics or {}).items()},
    )
    written.append(write_json(summary, out_dir / "summary.json"))
    logger.info("artifacts_written", out_dir=str(out_dir), files=len(written))
    return written
