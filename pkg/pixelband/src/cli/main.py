"""
pixelband command line.

    pixelband synth --count 100 --r 50 --eta 50 --out-dir corpus
    pixelband inpaint image.pgm --mask mask.pgm --out-dir out/inpaint
    pixelband superres low.pgm --scale 2 --baselines --reference truth.pgm
    pixelband metrics reference.pgm candidate.pgm
    pixelband bench inpaint-synth --count 10

Exit codes: 0 success, 1 a command failed, 2 usage or configuration error.
"""
import argparse
import sys
import warnings
from pathlib import Path

import structlog

from pixelband.src.config import configure_logging, get_settings
from pixelband.src.errors import ConfigError, KappaFloorWarning, PixelbandError
from pixelband.src.imaging import (
    Image,
    Mask,
    circle_mask_for_count,
    denormalize,
    normalize,
    random_mask,
    read_netpbm,
    synth_pw_image,
    write_netpbm,
    write_truth,
)
from pixelband.src.metrics import MetricReport, compare
from pixelband.src.pipeline import BENCH_SUITES, RunConfig, inpaint, load_run_config, superres
from pixelband.src.pipeline.bench import run_suite
from pixelband.src.pipeline.reports import (
    METRICS_SCHEMA,
    markdown_table,
    metrics_frame,
    write_csv,
    write_reconstruction,
)

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# flags forwarded to RunConfig; dest names match its fields
RUN_FLAGS = (
    "kernel", "eta", "sigma", "gamma", "kappa_mode", "kappa", "literal_alg1",
    "delta0", "delta_r", "jitter", "seed", "threads", "scale", "out_dir",
    "baselines", "strict", "observed_fraction", "weights", "weight_power",
)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("run configuration")
    group.add_argument("--config", type=Path, help="key=value file with run settings")
    group.add_argument("--kernel", choices=["pw", "gauss"])
    group.add_argument("--eta", type=float, help="Paley-Wiener frequency bound")
    group.add_argument("--sigma", type=float, help="Gaussian bandwidth")
    group.add_argument("--gamma", type=float, help="risk probability in (0, 1)")
    group.add_argument("--kappa-mode", choices=["estimate-pw", "manual", "norm-floor"])
    group.add_argument("--kappa", type=float, help="norm bound for manual mode")
    group.add_argument("--literal-alg1", action="store_true", default=None,
                       help="scale kappa by n + 1")
    group.add_argument("--delta0", type=float)
    group.add_argument("--delta-r", type=float, help="grid quantization correction")
    group.add_argument("--jitter", type=float, help="diagonal regularization of the Gram matrix")
    group.add_argument("--seed", type=int)
    group.add_argument("--threads", type=int, help="workers for band computation, 0 = all cores")
    group.add_argument("--out-dir", type=Path)
    group.add_argument("--strict", action="store_true", default=None,
                       help="fail if any query cannot be given an interval")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pixelband",
        description="Kernel interpolation of missing pixels with simultaneous confidence bands",
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="write a seeded corpus of band-limited images")
    synth.add_argument("--count", type=int, default=1)
    synth.add_argument("--r", type=int, default=50, help="image side in pixels")
    synth.add_argument("--knots", type=int, default=20)
    _add_run_flags(synth)

    inp = commands.add_parser("inpaint", help="estimate the unobserved pixels of an image")
    inp.add_argument("image", type=Path)
    inp.add_argument("--mask", type=Path, help="PGM mask, nonzero = observed")
    inp.add_argument("--observed-fraction", type=float,
                     help="random mask observing this fraction (when no --mask)")
    inp.add_argument("--circle-observed", type=int,
                     help="centered circular hole leaving this many pixels observed")
    inp.add_argument("--weights", action="store_true", default=None, help="render kernel weights")
    inp.add_argument("--weight-power", type=float)
    inp.add_argument("--reference", type=Path, help="ground truth for metrics")
    _add_run_flags(inp)

    sr = commands.add_parser("superres", help="upscale an image with bands")
    sr.add_argument("image", type=Path)
    sr.add_argument("--scale", type=int)
    sr.add_argument("--baselines", action="store_true", default=None,
                    help="also write nearest, bilinear and bicubic upsamplings")
    sr.add_argument("--weights", action="store_true", default=None, help="render kernel weights")
    sr.add_argument("--weight-power", type=float)
    sr.add_argument("--reference", type=Path, help="ground truth for metrics")
    _add_run_flags(sr)

    met = commands.add_parser("metrics", help="compare a candidate image against a reference")
    met.add_argument("reference", type=Path)
    met.add_argument("candidate", type=Path)
    met.add_argument("--normalized", action="store_true",
                     help="compare on the [-1, 1] scale instead of raw 8-bit")
    met.add_argument("--out-dir", type=Path)

    bench = commands.add_parser("bench", help="run a bench suite on synthetic corpora")
    bench.add_argument("suite", choices=sorted(BENCH_SUITES))
    bench.add_argument("--count", type=int, help="override the corpus size")
    bench.add_argument("--r", type=int, help="override the image side")
    bench.add_argument("--seed", type=int)
    bench.add_argument("--threads", type=int)
    bench.add_argument("--out-dir", type=Path)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    flags = {name: getattr(args, name, None) for name in RUN_FLAGS}
    return load_run_config(getattr(args, "config", None), **flags)


def _out_dir(config_dir: Path | None, command: str) -> Path:
    return config_dir or Path(get_settings().out_dir) / command


def _reference_metrics(
    reference: Path | None,
    results: dict[str, Image],
) -> dict[str, MetricReport]:
    if reference is None:
        return {}
    truth = read_netpbm(reference)
    return {name: compare(truth, image) for name, image in results.items()}


def cmd_synth(args: argparse.Namespace) -> int:
    config = _run_config(args)
    out_dir = _out_dir(config.out_dir, "synth")
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = config.seed or 0
    for k in range(args.count):
        image, truth = synth_pw_image(config.eta, args.r, n_knots=args.knots, seed=seed + k)
        write_netpbm(denormalize(image, clamp=True), out_dir / f"synth_{k:03d}.pgm")
        write_truth(truth, out_dir / f"synth_{k:03d}.truth")
    logger.info("corpus_written", count=args.count, r=args.r, eta=config.eta, out_dir=str(out_dir))
    print(f"wrote {args.count} images to {out_dir}")
    return EXIT_OK


def _inpaint_mask(args: argparse.Namespace, config: RunConfig, image: Image) -> Mask:
    h, w = image.shape
    if args.mask is not None:
        return Mask.from_image(read_netpbm(args.mask))
    if args.circle_observed is not None:
        mask, radius = circle_mask_for_count(h, w, args.circle_observed)
        logger.info("circle_mask", radius=radius, observed=mask.count)
        return mask
    return random_mask(h, w, config.observed_fraction, seed=config.seed)


def cmd_inpaint(args: argparse.Namespace) -> int:
    config = _run_config(args)
    image = read_netpbm(args.image)
    mask = _inpaint_mask(args, config, image)
    result = inpaint(config, image, mask)
    metrics = _reference_metrics(args.reference, {"sgki": result.estimate_image()})
    out_dir = _out_dir(config.out_dir, "inpaint")
    written = write_reconstruction("inpaint", config, result, out_dir, metrics)
    _report(result.failures, written, metrics)
    return EXIT_OK


def cmd_superres(args: argparse.Namespace) -> int:
    config = _run_config(args)
    image = read_netpbm(args.image)
    result = superres(config, image)
    metrics = _reference_metrics(
        args.reference, {"sgki": result.estimate_image(), **result.baselines}
    )
    out_dir = _out_dir(config.out_dir, "superres")
    written = write_reconstruction("superres", config, result, out_dir, metrics)
    _report(result.failures, written, metrics)
    return EXIT_OK


def _report(failures: int, written: list[Path], metrics: dict[str, MetricReport]) -> None:
    print(f"wrote {len(written)} files to {written[0].parent}")
    if failures:
        print(f"{failures} queries had no interval, see failures.csv")
    if metrics:
        print(markdown_table(metrics_frame(metrics)), end="")


def cmd_metrics(args: argparse.Namespace) -> int:
    reference = read_netpbm(args.reference)
    candidate = read_netpbm(args.candidate)
    if args.normalized:
        reference, candidate = normalize(reference), normalize(candidate)
    frame = metrics_frame({args.candidate.name: compare(reference, candidate)})
    if args.out_dir is not None:
        write_csv(frame, args.out_dir / "metrics.csv", METRICS_SCHEMA)
        (args.out_dir / "metrics.md").write_text(markdown_table(frame), encoding="utf-8")
    print(markdown_table(frame), end="")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    result = run_suite(args.suite, threads=args.threads, count=args.count, seed=args.seed,
                       resolution=args.r)
    out_dir = args.out_dir or Path(get_settings().out_dir) / "bench"
    result.write(out_dir)
    print(markdown_table(result.summary), end="")
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "inpaint": cmd_inpaint,
    "superres": cmd_superres,
    "metrics": cmd_metrics,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    configure_logging(args.log_level)
    warnings.simplefilter("default", KappaFloorWarning)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PixelbandError as e:
        logger.error("command_failed", command=args.command, error=type(e).__name__)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
