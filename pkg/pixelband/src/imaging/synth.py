"""
Synthetic band-limited images with a known ground truth.

f_*(x) = sum_k w_k k(x, c_k) / normalizer with uniform knots c_k in [0,1]^2
and weights in [-1, 1]. The normalizer is max |f_*| over the pixel grid when
that exceeds 1, else 1. The truth object is kept so coverage checks can
evaluate f_* anywhere, not only on the grid.
"""
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import structlog

from pixelband.src.errors import InvalidArgumentError
from pixelband.src.imaging.grid import grid_coords
from pixelband.src.imaging.image import Image, Scale
from pixelband.src.kernels import KernelKind, KernelSpec, gram, kernel_matrix

logger = structlog.get_logger()

DEFAULT_KNOTS = 20


@dataclass(frozen=True)
class SyntheticTruth:
    spec: KernelSpec
    knots: np.ndarray     # (k, 2)
    weights: np.ndarray   # (k,)
    normalizer: float = 1.0

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=np.float64).reshape(-1, self.spec.dim)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if knots.shape[0] != weights.shape[0]:
            raise InvalidArgumentError("one weight per knot is required")
        if not self.normalizer > 0:
            raise InvalidArgumentError(f"normalizer must be positive, got {self.normalizer}")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "weights", weights)

    def __call__(self, points) -> np.ndarray:
        return eval_truth_many(self, points)

    def norm_sq(self) -> float:
        return truth_norm_sq(self)


def eval_truth_many(truth: SyntheticTruth, points) -> np.ndarray:
    """f_* at each row of an (m, d) array."""
    K = kernel_matrix(truth.spec, points, truth.knots)
    # row-wise reduction so a single point gives the same bits as a batch
    return np.sum(K * truth.weights, axis=1) / truth.normalizer


def eval_truth(truth: SyntheticTruth, x) -> float:
    """f_*(x) for one point."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (truth.spec.dim,):
        raise InvalidArgumentError(f"point must have dimension {truth.spec.dim}, got {x.shape}")
    return float(eval_truth_many(truth, x[None, :])[0])


def truth_norm_sq(truth: SyntheticTruth) -> float:
    """||f_*||^2 in the RKHS, w^T K_knots w / normalizer^2."""
    K = gram(truth.spec, truth.knots)
    return float(truth.weights @ K @ truth.weights) / truth.normalizer ** 2


def synth_pw_image(
    eta: float,
    r: int,
    n_knots: int = DEFAULT_KNOTS,
    seed: int | None = None,
    zero_weights: bool = False,
) -> tuple[Image, SyntheticTruth]:
    """
    Draw a band-limited truth and render it on an r x r grid.

    Args:
        eta: frequency bound of the generating kernel
        r: image side in pixels
        n_knots: number of kernel centers
        seed: generator seed
        zero_weights: force every weight to 0

    Returns:
        (normalized grayscale image, truth)
    """
    if not eta > 0:
        raise InvalidArgumentError(f"eta must be positive, got {eta}")
    if r < 1 or n_knots < 1:
        raise InvalidArgumentError("r and n_knots must be positive")

    rng = np.random.default_rng(seed)
    spec = KernelSpec.paley_wiener(eta)
    knots = rng.uniform(0.0, 1.0, size=(n_knots, 2))
    weights = rng.uniform(-1.0, 1.0, size=n_knots)
    if zero_weights:
        weights = np.zeros(n_knots)

    coords = grid_coords(r, r)
    peak = float(np.max(np.abs(eval_truth_many(SyntheticTruth(spec, knots, weights), coords))))
    truth = SyntheticTruth(spec, knots, weights, normalizer=peak if peak > 1.0 else 1.0)
    values = eval_truth_many(truth, coords).reshape(r, r)

    logger.debug("synthetic_image", eta=eta, r=r, knots=n_knots, normalizer=truth.normalizer)
    return Image(values, scale=Scale.NORMALIZED), truth


def quantization_delta(truth: SyntheticTruth, h: int, w: int, oversample: int = 8) -> float:
    """
    Estimate of the grid-quantization correction delta_r.

    Max over pixel cells of |f^2(center) - f^2(x)| with x on an
    oversample x oversample sub-grid of the cell.
    """
    if oversample < 1:
        raise InvalidArgumentError("oversample must be positive")
    centers = grid_coords(h, w)
    f_center = eval_truth_many(truth, centers) ** 2
    steps = (np.arange(oversample) + 0.5) / oversample - 0.5
    di, dj = np.meshgrid(steps / (h + 1), steps / (w + 1), indexing="ij")
    offsets = np.column_stack([di.ravel(), dj.ravel()])

    worst = 0.0
    for offset in offsets:
        f_cell = eval_truth_many(truth, centers + offset) ** 2
        worst = max(worst, float(np.max(np.abs(f_cell - f_center))))
    return worst


def write_truth(truth: SyntheticTruth, path: str | Path) -> None:
    """Key=value sidecar; floats are written with repr so reading is exact."""
    if truth.spec.kind is not KernelKind.PALEY_WIENER:
        raise InvalidArgumentError("only Paley-Wiener truths are serialized")
    lines = [
        "kernel=pw",
        f"eta={truth.spec.eta!r}",
        f"normalizer={truth.normalizer!r}",
        f"n_knots={len(truth.weights)}",
    ]
    for k, (knot, weight) in enumerate(zip(truth.knots, truth.weights, strict=True)):
        lines.append(f"knot_{k}={float(knot[0])!r} {float(knot[1])!r}")
        lines.append(f"weight_{k}={float(weight)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_truth(path: str | Path) -> SyntheticTruth:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()

    try:
        if entries.get("kernel", "pw") != "pw":
            raise InvalidArgumentError(f"unsupported truth kernel {entries['kernel']}")
        n = int(entries["n_knots"])
        knots = [[float(c) for c in entries[f"knot_{k}"].split()] for k in range(n)]
        weights = [float(entries[f"weight_{k}"]) for k in range(n)]
        spec = KernelSpec.paley_wiener(float(entries["eta"]))
        normalizer = float(entries["normalizer"])
        return SyntheticTruth(spec, np.array(knots), np.array(weights), normalizer)
    except KeyError as e:
        raise InvalidArgumentError(f"{path}: missing key {e.args[0]}") from e
