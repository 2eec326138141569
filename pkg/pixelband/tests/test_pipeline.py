"""
Reconstruction workflow, run configuration and artifact tests.
"""
import json
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from pixelband.src.errors import ConfigError, QueryFailure, ShapeMismatchError
from pixelband.src.imaging import (
    Image,
    Mask,
    Scale,
    denormalize,
    random_mask,
    read_netpbm,
    synth_pw_image,
)
from pixelband.src.kernels import KernelKind
from pixelband.src.pipeline import (
    RunConfig,
    inpaint,
    load_run_config,
    point_estimate,
    reconstruct,
    superres,
)
from pixelband.src.pipeline.reports import (
    INTERVALS_SCHEMA,
    intervals_frame,
    markdown_table,
    read_csv,
    write_reconstruction,
)
from pixelband.src.uq import KappaMode


@pytest.fixture
def gauss_config():
    return RunConfig(kernel="gauss", sigma=0.1, kappa=50.0, threads=1)


# Configuration

def test_defaults_resolve_kappa_mode():
    config = RunConfig()
    assert config.kernel is KernelKind.PALEY_WIENER
    assert config.resolved_kappa_mode is KappaMode.ESTIMATE_PW
    assert RunConfig(kernel="gauss", sigma=0.1, kappa=1.0).resolved_kappa_mode is KappaMode.MANUAL
    assert config.to_dict()["kappa_mode"] == "estimate-pw"


@pytest.mark.parametrize(
    "flags",
    [
        {"gamma": 1.0},
        {"gamma": 0.0},
        {"eta": -5.0},
        {"kernel": "gauss"},                         # no sigma
        {"kernel": "gauss", "sigma": 0.1},           # manual mode without kappa
        {"kernel": "gauss", "sigma": 0.1, "kappa_mode": "estimate-pw", "kappa": 1.0},
        {"kappa_mode": "manual"},
        {"kappa": -1.0, "kappa_mode": "manual"},
        {"jitter": -1e-6},
        {"scale": 1},
        {"observed_fraction": 0.0},
    ],
)
def test_invalid_run_configs(flags):
    with pytest.raises(ConfigError):
        load_run_config(**flags)


def test_precedence_flags_file_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PIXELBAND_RUN_ETA", "30")
    monkeypatch.setenv("PIXELBAND_RUN_GAMMA", "0.2")
    assert load_run_config().eta == 30.0

    path = tmp_path / "run.env"
    path.write_text("# run settings\neta=40\nDELTA_R=0.01\n", encoding="utf-8")
    from_file = load_run_config(path)
    assert from_file.eta == 40.0
    assert from_file.delta_r == 0.01
    assert from_file.gamma == 0.2

    from_flags = load_run_config(path, eta=60.0, jitter=None)
    assert from_flags.eta == 60.0
    assert from_flags.jitter == 0.0


def test_config_file_errors(tmp_path):
    path = tmp_path / "bad.env"
    path.write_text("etaa=40\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="etaa"):
        load_run_config(path)
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.env")


# Reconstruction

def test_fully_observed_image_passes_through(gauss_config, rng, tmp_path):
    image = Image(rng.integers(0, 256, size=(10, 10)))
    result = inpaint(gauss_config, image, Mask.full(10, 10))
    assert len(result.query_pixels) == 0
    assert np.array_equal(result.estimate_image().data, image.data)
    write_reconstruction("inpaint", gauss_config, result, tmp_path)
    assert len(read_csv(tmp_path / "intervals.csv")) == 0


def test_observed_pixels_are_unchanged(gauss_config, rng):
    image = Image(rng.integers(0, 256, size=(8, 8)))
    mask = random_mask(8, 8, 0.5, seed=1)
    result = reconstruct(gauss_config, image, mask)
    for name in ["estimate_image", "lower_image", "upper_image"]:
        out = getattr(result, name)()
        assert np.array_equal(out.data[mask.observed], image.data[mask.observed])
    assert np.all(result.lower <= result.estimate + 1e-12)
    assert np.all(result.estimate <= result.upper + 1e-12)


def test_low_maxval_round_trips(gauss_config, rng, tmp_path):
    image = Image(rng.integers(0, 16, size=(8, 8)), maxval=15)
    mask = random_mask(8, 8, 0.5, seed=2)
    result = reconstruct(gauss_config, image, mask)
    for name in ["estimate_image", "lower_image", "upper_image"]:
        out = getattr(result, name)()
        assert out.maxval == 15
        assert out.data.max() <= 15
        assert np.array_equal(out.data[mask.observed], image.data[mask.observed])
    write_reconstruction("inpaint", gauss_config, result, tmp_path)
    written = read_netpbm(tmp_path / "estimate.pgm")
    assert written.maxval == 15
    assert np.array_equal(written.data[mask.observed], image.data[mask.observed])


def test_point_estimate_matches_band_midpoints(gauss_config, rng):
    image = Image(rng.integers(0, 256, size=(8, 8, 3)))
    mask = random_mask(8, 8, 0.4, seed=2)
    result = reconstruct(gauss_config, image, mask)
    estimate = point_estimate(gauss_config.kernel_spec(), image, mask)
    np.testing.assert_allclose(result.estimate, estimate, atol=1e-10)
    assert result.channels == 3
    assert result.interps[0].factor is result.interps[2].factor


def test_synthetic_inpaint_covers_truth():
    image, truth = synth_pw_image(50.0, 30, seed=21)
    mask = random_mask(30, 30, 0.1, seed=22)
    config = RunConfig(eta=50.0, threads=1)
    raw = denormalize(image, clamp=True)
    result = inpaint(config, raw, mask)
    truth_grid = image.data
    covered = result.covers(truth_grid)
    assert covered.shape == (810, 1)
    assert covered.mean() >= 0.99


def test_mask_shape_mismatch(gauss_config):
    with pytest.raises(ShapeMismatchError):
        inpaint(gauss_config, Image(np.zeros((4, 4))), Mask.full(4, 5))


def test_superres_places_low_res_pixels(gauss_config, rng):
    low = Image(rng.integers(0, 256, size=(5, 5)))
    result = superres(gauss_config, low, scale=2)
    assert result.shape == (10, 10)
    assert result.mask.count == 25
    assert len(result.query_pixels) == 75
    assert np.array_equal(result.estimate_image().data[::2, ::2], low.data)
    assert len(intervals_frame(result)) == 75
    assert result.baselines == {}


def test_superres_baselines(rng):
    config = RunConfig(kernel="gauss", sigma=0.1, kappa=50.0, threads=1, baselines=True)
    low = Image(rng.integers(0, 256, size=(4, 4, 3)))
    result = superres(config, low)
    assert sorted(result.baselines) == ["bicubic", "bilinear", "nearest"]
    assert all(image.shape == (8, 8) for image in result.baselines.values())


# Artifacts

def test_grayscale_artifacts(gauss_config, rng, tmp_path):
    config = gauss_config.model_copy(update={"weights": True})
    image = Image(rng.integers(0, 256, size=(6, 6)))
    mask = random_mask(6, 6, 0.5, seed=4)
    result = inpaint(config, image, mask)
    written = write_reconstruction("inpaint", config, result, tmp_path)
    names = {p.name for p in written}
    assert {"estimate.pgm", "lower.pgm", "upper.pgm", "uncertainty.pgm",
            "weights_c0.pgm", "intervals.csv", "summary.json"} <= names
    assert "failures.csv" not in names

    first = (tmp_path / "intervals.csv").read_text(encoding="utf-8").splitlines()[0]
    assert first == f"# schema={INTERVALS_SCHEMA}"
    frame = read_csv(tmp_path / "intervals.csv")
    assert list(frame.columns) == ["i", "j", "channel", "estimate", "lower", "upper", "width"]
    assert len(frame) == mask.missing
    assert frame["i"].min() >= 1

    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["queries"] == mask.missing
    assert summary["config"]["kernel"] == "gauss"
    assert summary["channel_bands"][0]["kappa_bound"]["mode"] == "manual"
    assert read_netpbm(tmp_path / "estimate.pgm").shape == (6, 6)


def test_color_artifacts(gauss_config, rng, tmp_path):
    image = Image(rng.integers(0, 256, size=(5, 5, 3)))
    mask = random_mask(5, 5, 0.6, seed=5)
    result = inpaint(gauss_config, image, mask)
    write_reconstruction("inpaint", gauss_config, result, tmp_path)
    assert read_netpbm(tmp_path / "estimate.ppm").channels == 3
    assert read_netpbm(tmp_path / "uncertainty.pgm").channels == 1
    frame = read_csv(tmp_path / "intervals.csv")
    assert len(frame) == 3 * mask.missing
    assert sorted(frame["channel"].unique()) == [0, 1, 2]


def test_failed_queries_are_reported(gauss_config, rng, tmp_path):
    image = Image(rng.integers(0, 256, size=(4, 4)))
    result = inpaint(gauss_config, image, random_mask(4, 4, 0.5, seed=6))
    band = result.bands[0]
    lower = band.lower.copy()
    lower[0] = np.nan
    result.bands = [replace(band, lower=lower, failures=(QueryFailure(0, "g0 below floor"),))]
    written = write_reconstruction("inpaint", gauss_config, result, tmp_path)
    assert "failures.csv" in {p.name for p in written}
    failures = read_csv(tmp_path / "failures.csv")
    assert list(failures.columns) == ["i", "j", "channel", "index", "reason"]
    assert failures.loc[0, "i"] == result.query_pixels[0, 0]
    assert failures.loc[0, "reason"] == "g0 below floor"
    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["failures"] == 1


def test_markdown_table_formats_values():
    frame = pd.DataFrame([{"method": "sgki", "psnr": float("inf"), "ssim": 0.123456}])
    table = markdown_table(frame)
    assert table.splitlines()[0] == "| method | psnr | ssim |"
    assert "| sgki | inf | 0.1235 |" in table


def test_normalized_input_is_accepted(gauss_config):
    image = Image(np.zeros((4, 4)), scale=Scale.NORMALIZED)
    result = inpaint(gauss_config, image, random_mask(4, 4, 0.5, seed=0))
    assert result.estimate.shape == (4, 4, 1)
