"""
Command-line surface tests: exit codes and written artifacts.
"""
import numpy as np
import pytest

from pixelband.src.cli.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from pixelband.src.imaging import Image, Mask, read_netpbm, read_truth, write_netpbm
from pixelband.src.pipeline.reports import read_csv

GAUSS = ["--kernel", "gauss", "--sigma", "0.1", "--kappa", "50", "--threads", "1"]


@pytest.fixture
def small_image(tmp_path, rng):
    return write_netpbm(Image(rng.integers(0, 256, size=(8, 8))), tmp_path / "in.pgm")


def test_synth_writes_images_and_truths(tmp_path):
    out = tmp_path / "corpus"
    code = main(["synth", "--count", "2", "--r", "10", "--eta", "30", "--seed", "7",
                 "--out-dir", str(out)])
    assert code == EXIT_OK
    assert read_netpbm(out / "synth_001.pgm").shape == (10, 10)
    assert read_truth(out / "synth_000.truth").spec.eta == 30.0


def test_synth_is_seeded(tmp_path):
    for name in ["a", "b"]:
        main(["synth", "--r", "6", "--seed", "3", "--out-dir", str(tmp_path / name)])
    a = (tmp_path / "a" / "synth_000.pgm").read_bytes()
    assert a == (tmp_path / "b" / "synth_000.pgm").read_bytes()


def test_inpaint_with_mask_and_reference(tmp_path, small_image):
    observed = np.zeros((8, 8), dtype=bool)
    observed[::2, :] = True
    mask_path = write_netpbm(Mask(observed).to_image(), tmp_path / "mask.pgm")
    out = tmp_path / "run"
    code = main(["inpaint", str(small_image), "--mask", str(mask_path), "--reference",
                 str(small_image), "--weights", "--out-dir", str(out), *GAUSS])
    assert code == EXIT_OK
    assert (out / "weights_c0.pgm").exists()
    assert len(read_csv(out / "intervals.csv")) == 32
    metrics = read_csv(out / "metrics.csv")
    assert metrics.loc[0, "method"] == "sgki"
    assert "| method |" in (out / "metrics.md").read_text(encoding="utf-8")


def test_inpaint_random_and_circle_masks(tmp_path, small_image):
    out = tmp_path / "random"
    assert main(["inpaint", str(small_image), "--observed-fraction", "0.5",
                 "--out-dir", str(out), *GAUSS]) == EXIT_OK
    assert len(read_csv(out / "intervals.csv")) == 32

    out = tmp_path / "circle"
    assert main(["inpaint", str(small_image), "--circle-observed", "52",
                 "--out-dir", str(out), *GAUSS]) == EXIT_OK
    assert (out / "summary.json").exists()


def test_inpaint_mask_shape_mismatch_fails(tmp_path, small_image, capsys):
    mask_path = write_netpbm(Mask.full(4, 4).to_image(), tmp_path / "mask.pgm")
    code = main(["inpaint", str(small_image), "--mask", str(mask_path),
                 "--out-dir", str(tmp_path / "o"), *GAUSS])
    assert code == EXIT_FAILURE
    assert "error:" in capsys.readouterr().err


def test_missing_input_file_fails(tmp_path):
    assert main(["inpaint", str(tmp_path / "nope.pgm"), *GAUSS]) == EXIT_FAILURE


def test_gauss_without_kappa_is_a_usage_error(small_image, capsys):
    code = main(["inpaint", str(small_image), "--kernel", "gauss", "--sigma", "0.1"])
    assert code == EXIT_USAGE
    assert "configuration error" in capsys.readouterr().err


def test_unknown_command_and_help():
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_superres_with_baselines(tmp_path, rng):
    low = write_netpbm(Image(rng.integers(0, 256, size=(4, 4, 3))), tmp_path / "low.ppm")
    out = tmp_path / "sr"
    code = main(["superres", str(low), "--scale", "2", "--baselines", "--out-dir", str(out),
                 *GAUSS])
    assert code == EXIT_OK
    assert read_netpbm(out / "estimate.ppm").shape == (8, 8)
    for name in ["nearest", "bilinear", "bicubic"]:
        assert read_netpbm(out / f"{name}.ppm").channels == 3


def test_metrics_command(tmp_path, small_image, capsys):
    out = tmp_path / "m"
    assert main(["metrics", str(small_image), str(small_image), "--out-dir", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "inf" in printed
    assert read_csv(out / "metrics.csv").loc[0, "mse"] == 0.0


def test_metrics_shape_mismatch(tmp_path, small_image):
    other = write_netpbm(Image(np.zeros((4, 4))), tmp_path / "other.pgm")
    assert main(["metrics", str(small_image), str(other)]) == EXIT_FAILURE


def test_bench_command(tmp_path):
    out = tmp_path / "bench"
    code = main(["bench", "coverage", "--count", "2", "--r", "12", "--threads", "1",
                 "--out-dir", str(out)])
    assert code == EXIT_OK
    assert (out / "coverage.md").exists()
    assert len(read_csv(out / "coverage_runs.csv")) == 2
