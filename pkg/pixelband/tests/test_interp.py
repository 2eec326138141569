"""
Minimum-norm interpolant tests.
"""
import numpy as np
import pytest

from pixelband.src.errors import (
    ConditioningError,
    DuplicateInputError,
    InvalidArgumentError,
    ShapeMismatchError,
)
from pixelband.src.interp import (
    SampleSet,
    factorize,
    find_duplicates,
    fit,
    fit_with_factor,
    loo_scores,
    norm_sq,
    predict,
    predict_many,
    select_jitter,
)
from pixelband.src.kernels import KernelSpec, gram, kernel_matrix


@pytest.mark.parametrize("kind", ["gauss", "pw"])
def test_interpolant_reproduces_samples(make_instance, kind):
    spec, samples = make_instance(kind, 25, seed=3)
    interp = fit(spec, samples)
    predicted = np.array([predict(interp, x) for x in samples.points])
    np.testing.assert_allclose(predicted, samples.values, atol=1e-8)


def test_norm_matches_dense_solve(gauss_instance):
    spec, samples = gauss_instance
    interp = fit(spec, samples)
    K = gram(spec, samples.points)
    expected = samples.values @ np.linalg.solve(K, samples.values)
    assert norm_sq(interp) == pytest.approx(expected, rel=1e-10)
    np.testing.assert_allclose(interp.alpha, np.linalg.solve(K, samples.values), rtol=1e-9)


def test_minimum_norm_against_other_interpolants(gauss_instance, rng):
    """Any interpolant with extra kernel centers has a norm at least as large."""
    spec, samples = gauss_instance
    interp = fit(spec, samples)
    extra = rng.uniform(size=(6, 2))
    K_ss = gram(spec, samples.points)
    K_se = kernel_matrix(spec, samples.points, extra)
    K_zz = gram(spec, np.vstack([samples.points, extra]))
    for _ in range(10):
        c_extra = rng.normal(size=6)
        c_samples = np.linalg.solve(K_ss, samples.values - K_se @ c_extra)
        c = np.concatenate([c_samples, c_extra])
        assert c @ K_zz @ c >= interp.norm_sq * (1 - 1e-9)


def test_predict_many_matches_predict(pw_instance, rng):
    spec, samples = pw_instance
    interp = fit(spec, samples)
    queries = rng.uniform(size=(40, 2))
    batch = predict_many(interp, queries, chunk_size=7)
    single = np.array([predict(interp, q) for q in queries])
    np.testing.assert_allclose(batch, single, rtol=1e-12, atol=1e-12)


def test_duplicate_inputs_rejected():
    spec = KernelSpec.gaussian(0.1)
    points = np.array([[0.1, 0.1], [0.5, 0.5], [0.1, 0.1], [0.9, 0.2]])
    assert find_duplicates(points) == [(0, 2)]
    with pytest.raises(DuplicateInputError) as exc:
        fit(spec, SampleSet(points, np.zeros(4)))
    assert exc.value.pairs == [(0, 2)]


def test_singular_gram_reports_pivot_and_jitter_recovers():
    """A heavily oversampled band-limited Gram matrix is numerically singular."""
    spec = KernelSpec.paley_wiener(5.0)
    side = np.linspace(0.0, 0.05, 10)
    ii, jj = np.meshgrid(side, side, indexing="ij")
    points = np.column_stack([ii.ravel(), jj.ravel()])
    samples = SampleSet(points, np.linspace(-0.5, 0.5, len(points)))
    with pytest.raises(ConditioningError) as exc:
        fit(spec, samples)
    assert 2 <= exc.value.pivot <= len(points)
    assert "--jitter" in str(exc.value)
    interp = fit(spec, samples, jitter=1e-2)
    assert interp.jitter == 1e-2


def test_jitter_residual_grows_with_jitter(gauss_instance):
    spec, samples = gauss_instance
    residuals = []
    for jitter in [0.0, 1e-6, 1e-3, 1e-1]:
        interp = fit(spec, samples, jitter=jitter)
        predicted = kernel_matrix(spec, samples.points, samples.points) @ interp.alpha
        residuals.append(np.linalg.norm(predicted - samples.values))
    assert residuals[0] < 1e-8
    assert residuals == sorted(residuals)


def test_shared_factor_across_channels(gauss_instance):
    spec, samples = gauss_instance
    factor = factorize(spec, samples.points)
    a = fit_with_factor(factor, samples)
    b = fit_with_factor(factor, samples.with_values(-samples.values))
    np.testing.assert_allclose(b.alpha, -a.alpha)
    assert a.norm_sq == pytest.approx(b.norm_sq)


def test_factor_rejects_other_inputs(gauss_instance, make_instance):
    spec, samples = gauss_instance
    factor = factorize(spec, samples.points)
    _, other = make_instance("gauss", 16, seed=9)
    with pytest.raises(ShapeMismatchError):
        fit_with_factor(factor, other)


def test_coincident_sample_lookup(gauss_instance):
    spec, samples = gauss_instance
    interp = fit(spec, samples)
    assert interp.coincident_sample(samples.points[3]) == 3
    assert interp.coincident_sample(samples.points[3] + 1e-9) is None


def test_single_sample_interpolant():
    spec = KernelSpec.gaussian(0.1)
    interp = fit(spec, SampleSet([[0.5, 0.5]], [0.4]))
    assert interp.norm_sq == pytest.approx(0.16)
    assert predict(interp, [0.5, 0.5]) == pytest.approx(0.4)


@pytest.mark.parametrize(
    "points, values",
    [
        ([[0.1, 0.2]], [1.5]),               # value outside [-1, 1]
        ([[1.2, 0.2]], [0.0]),               # input outside the unit square
        ([[0.1, 0.2], [0.3, 0.4]], [0.0]),   # length mismatch
        (np.zeros((0, 2)), np.zeros(0)),     # empty
    ],
)
def test_sample_set_validation(points, values):
    with pytest.raises(InvalidArgumentError):
        SampleSet(np.asarray(points, dtype=float), np.asarray(values, dtype=float))


def test_dimension_mismatch_rejected():
    samples = SampleSet([[0.1, 0.2]], [0.5])
    with pytest.raises(ShapeMismatchError):
        fit(KernelSpec.gaussian(0.1, dim=3), samples)


@pytest.mark.parametrize("kind", ["gauss", "pw"])
def test_interpolant_is_linear_in_values(make_instance, kind, rng):
    spec, samples = make_instance(kind, 25, seed=4)
    half = samples.with_values(samples.values / 2.0)
    other = samples.with_values(rng.uniform(-1.0, 1.0, size=samples.n) / 2.0)
    a, b = fit(spec, half), fit(spec, other)
    ab = fit(spec, samples.with_values(half.values + other.values))
    full = fit(spec, samples)
    np.testing.assert_allclose(full.alpha, 2.0 * a.alpha, rtol=1e-12, atol=1e-12)
    assert full.norm_sq == pytest.approx(4.0 * a.norm_sq, rel=1e-12)
    np.testing.assert_allclose(ab.alpha, a.alpha + b.alpha, rtol=1e-9, atol=1e-9)


def test_loo_scores_match_refitting(gauss_instance):
    """Closed-form leave-one-out residuals equal explicit refits without each sample."""
    spec, samples = gauss_instance
    grid = [1e-4, 1e-2, 1.0]
    scores = loo_scores(spec, samples, grid)
    for rel, score in zip(grid, scores):
        residuals = []
        for i in range(samples.n):
            keep = np.arange(samples.n) != i
            held_out = SampleSet(samples.points[keep], samples.values[keep])
            interp = fit(spec, held_out, jitter=rel * spec.diagonal)
            residuals.append(samples.values[i] - predict(interp, samples.points[i]))
        assert score == pytest.approx(np.mean(np.square(residuals)), rel=1e-6)


def test_select_jitter_is_the_best_scored_candidate(pw_instance):
    spec, samples = pw_instance
    grid = [1e-6, 1e-3, 1e-1]
    scores = loo_scores(spec, samples, grid)
    jitter = select_jitter(spec, samples, grid)
    assert jitter == pytest.approx(grid[int(np.argmin(scores))] * spec.diagonal)


def test_noisy_values_select_more_jitter():
    """Values a smooth kernel cannot follow are smoothed; values it produced are not."""
    spec = KernelSpec.gaussian(0.3)
    side = np.linspace(0.05, 0.95, 7)
    ii, jj = np.meshgrid(side, side, indexing="ij")
    points = np.column_stack([ii.ravel(), jj.ravel()])
    smooth = 0.5 * np.sin(2.0 * points[:, 0]) * np.cos(points[:, 1])
    noisy = smooth + np.random.default_rng(0).uniform(-0.3, 0.3, size=len(points))
    grid = [1e-6, 1e-4, 1e-2, 1.0]
    clean_jitter = select_jitter(spec, SampleSet(points, smooth), grid)
    noisy_jitter = select_jitter(spec, SampleSet(points, noisy), grid)
    assert noisy_jitter > clean_jitter


def test_loo_rejects_bad_grid(gauss_instance):
    spec, samples = gauss_instance
    with pytest.raises(InvalidArgumentError):
        loo_scores(spec, samples, [])
    with pytest.raises(InvalidArgumentError):
        loo_scores(spec, samples, [1e-3, 0.0])
