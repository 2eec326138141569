"""
Kernel evaluation tests.
"""
import numpy as np
import pytest

from pixelband.src.errors import InvalidArgumentError, ShapeMismatchError
from pixelband.src.kernels import (
    KernelKind,
    KernelSpec,
    cross_kernel,
    eval_kernel,
    gram,
    kernel_matrix,
)


def test_pw_diagonal_is_eta_over_pi_squared():
    """k(u, u) = (eta / pi)^2 in two dimensions."""
    spec = KernelSpec.paley_wiener(50.0)
    value = eval_kernel(spec, [0.3, 0.7], [0.3, 0.7])
    assert value == pytest.approx((50.0 / np.pi) ** 2, rel=1e-15)
    assert spec.diagonal == pytest.approx(value, rel=1e-15)


def test_pw_known_value_one_dimension():
    """sin(pi/2) / (pi/2) / pi = 2 / pi^2."""
    spec = KernelSpec.paley_wiener(1.0, dim=1)
    assert eval_kernel(spec, [0.0], [np.pi / 2]) == pytest.approx(2.0 / np.pi ** 2, rel=1e-14)


def test_pw_series_is_continuous_near_zero():
    spec = KernelSpec.paley_wiener(50.0)
    at_zero = eval_kernel(spec, [0.5, 0.5], [0.5, 0.5])
    near = eval_kernel(spec, [0.5, 0.5], [0.5 + 1e-9, 0.5])
    just_above = eval_kernel(spec, [0.5, 0.5], [0.5 + 2e-8, 0.5])
    assert near == pytest.approx(at_zero, rel=1e-12)
    assert just_above == pytest.approx(at_zero, rel=1e-10)


def test_pw_at_tiny_offsets_equals_diagonal():
    spec = KernelSpec.paley_wiener(50.0)
    at_zero = eval_kernel(spec, [0.5, 0.5], [0.5, 0.5])
    for offset in [1e-12, -1e-12, 3e-13]:
        value = eval_kernel(spec, [0.5, 0.5], [0.5 + offset, 0.5 - offset])
        assert value == pytest.approx(at_zero, rel=1e-12)


def test_gaussian_value_at_one_sigma():
    spec = KernelSpec.gaussian(0.1)
    assert eval_kernel(spec, [0.2, 0.2], [0.3, 0.2]) == pytest.approx(np.exp(-0.5), rel=1e-14)
    assert spec.diagonal == 1.0


@pytest.mark.parametrize("spec", [KernelSpec.paley_wiener(30.0), KernelSpec.gaussian(0.07)])
def test_kernel_matrix_is_symmetric(spec, rng):
    a = rng.uniform(size=(7, 2))
    b = rng.uniform(size=(5, 2))
    np.testing.assert_allclose(kernel_matrix(spec, a, b), kernel_matrix(spec, b, a).T,
                               rtol=1e-14, atol=1e-12)


@pytest.mark.parametrize("spec", [KernelSpec.paley_wiener(50.0), KernelSpec.gaussian(0.05)])
def test_kernel_is_exactly_symmetric(spec, rng):
    u = rng.uniform(size=(1000, 2))
    v = rng.uniform(size=(1000, 2))
    for a, b in zip(u, v):
        assert eval_kernel(spec, a, b) == eval_kernel(spec, b, a)


@pytest.mark.parametrize("spec", [KernelSpec.paley_wiener(50.0), KernelSpec.gaussian(0.05)])
def test_kernel_is_translation_invariant(spec, rng):
    u = rng.uniform(size=(200, 2))
    v = rng.uniform(size=(200, 2))
    shift = rng.uniform(-0.5, 0.5, size=2)
    before = np.array([eval_kernel(spec, a, b) for a, b in zip(u, v)])
    after = np.array([eval_kernel(spec, a + shift, b + shift) for a, b in zip(u, v)])
    np.testing.assert_allclose(after, before, rtol=1e-9, atol=1e-10 * spec.diagonal)


@pytest.mark.parametrize("spec", [KernelSpec.paley_wiener(50.0), KernelSpec.gaussian(0.05)])
@pytest.mark.parametrize("n", [2, 10, 50])
def test_gram_positive_semidefinite_on_random_sets(spec, n):
    for seed in range(5):
        points = np.random.default_rng(seed).uniform(size=(n, 2))
        eigenvalues = np.linalg.eigvalsh(gram(spec, points))
        assert eigenvalues.min() >= -1e-10 * eigenvalues.max()


@pytest.mark.parametrize("spec", [KernelSpec.paley_wiener(30.0), KernelSpec.gaussian(0.07)])
def test_gram_symmetric_with_constant_diagonal(spec, rng):
    points = rng.uniform(size=(12, 2))
    K = gram(spec, points)
    assert np.array_equal(K, K.T)
    np.testing.assert_allclose(np.diag(K), spec.diagonal, rtol=1e-14)


def test_gram_matches_scalar_evaluation(rng):
    spec = KernelSpec.paley_wiener(20.0)
    points = rng.uniform(size=(6, 2))
    K = gram(spec, points)
    for i in range(6):
        for j in range(6):
            expected = eval_kernel(spec, points[i], points[j])
            assert K[i, j] == pytest.approx(expected, rel=1e-14, abs=1e-12)


def test_gram_positive_definite_for_distinct_inputs(gauss_instance):
    spec, samples = gauss_instance
    assert np.linalg.eigvalsh(gram(spec, samples.points)).min() > 0


def test_cross_kernel_matches_gram_row(rng):
    spec = KernelSpec.gaussian(0.2)
    points = rng.uniform(size=(5, 2))
    r0, k0 = cross_kernel(spec, points[2], points)
    assert r0 == 1.0
    np.testing.assert_allclose(k0, gram(spec, points)[2], rtol=1e-14)


def test_invalid_specs_rejected():
    with pytest.raises(InvalidArgumentError):
        KernelSpec.paley_wiener(0.0)
    with pytest.raises(InvalidArgumentError):
        KernelSpec.gaussian(-1.0)
    with pytest.raises(InvalidArgumentError):
        KernelSpec(KernelKind.PALEY_WIENER, eta=10.0, dim=0)


def test_shape_mismatch_rejected():
    spec = KernelSpec.gaussian(0.1)
    with pytest.raises(ShapeMismatchError):
        kernel_matrix(spec, np.zeros((3, 3)), np.zeros((2, 2)))
    with pytest.raises(ShapeMismatchError):
        eval_kernel(spec, [0.1], [0.1, 0.2])


def test_gram_needs_points():
    with pytest.raises(InvalidArgumentError):
        gram(KernelSpec.gaussian(0.1), np.zeros((0, 2)))


def test_spec_serialization():
    spec = KernelSpec.paley_wiener(50.0)
    assert spec.to_dict() == {"kind": "pw", "eta": 50.0, "sigma": None, "dim": 2}
    assert spec.label() == "pw(eta=50)"
