import numpy as np
import pytest

from gradcs import linalg
from gradcs.errors import ConfigError, DimensionError
from gradcs.transforms import TransformOperator, as_matrix, forward, inverse

KINDS = ["identity", "dct", "haar"]


def test_dct_of_constant():
    n, c = 16, 2.5
    t = TransformOperator("dct", n)
    expected = np.zeros(n)
    expected[0] = c * np.sqrt(n)
    np.testing.assert_allclose(forward(t, np.full(n, c)), expected, atol=1e-12)
    np.testing.assert_allclose(inverse(t, expected), np.full(n, c), atol=1e-12)


def test_dct_matches_cosine_definition():
    # orthonormal DCT-II written out term by term
    n = 8
    j = np.arange(n)
    ref = np.array([np.cos(np.pi * k * (2 * j + 1) / (2 * n)) for k in range(n)])
    ref *= np.sqrt(2.0 / n)
    ref[0] /= np.sqrt(2.0)
    np.testing.assert_allclose(TransformOperator("dct", n).as_matrix(), ref, atol=1e-13)


def test_haar_step():
    t = TransformOperator("haar", 4)
    np.testing.assert_allclose(forward(t, [1, 1, -1, -1]), [0, 2, 0, 0], atol=1e-15)


def test_haar_basis_by_hand():
    # rows: scaling, coarse detail, two fine details
    s = 1 / np.sqrt(2)
    ref = np.array([[0.5, 0.5, 0.5, 0.5],
                    [0.5, 0.5, -0.5, -0.5],
                    [s, -s, 0, 0],
                    [0, 0, s, -s]])
    np.testing.assert_allclose(TransformOperator("haar", 4).as_matrix(), ref, atol=1e-15)


def test_identity():
    t = TransformOperator("identity", 3)
    np.testing.assert_array_equal(forward(t, [1, 2, 3]), [1, 2, 3])
    np.testing.assert_array_equal(inverse(t, [1, 2, 3]), [1, 2, 3])
    np.testing.assert_array_equal(as_matrix(t), np.eye(3))


@pytest.mark.parametrize("kind", KINDS)
def test_round_trip(kind):
    f = np.array([5.0, -1.0, 2.0, 0.0])
    t = TransformOperator(kind, 4)
    np.testing.assert_allclose(inverse(t, forward(t, f)), f, atol=1e-10)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [8, 64, 256])
def test_orthonormal_and_parseval(kind, n, rng):
    t = TransformOperator(kind, n)
    P = as_matrix(t)
    np.testing.assert_allclose(P @ P.T, np.eye(n), atol=1e-10)
    np.testing.assert_allclose(P.T @ P, np.eye(n), atol=1e-10)
    F = rng.standard_normal((n, 1000))
    C = forward(t, F)
    np.testing.assert_allclose(np.linalg.norm(C, axis=0), np.linalg.norm(F, axis=0), rtol=1e-10)
    np.testing.assert_allclose(P @ F, C, atol=1e-10)
    np.testing.assert_allclose(inverse(t, C), F, atol=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_matrix_agrees_with_fast_path(kind, rng):
    t = TransformOperator(kind, 32)
    f = rng.standard_normal(32)
    np.testing.assert_allclose(linalg.matvec(as_matrix(t), f), forward(t, f), atol=1e-10)


def test_haar_partial_levels(rng):
    t = TransformOperator("haar", 16, levels=2)
    f = rng.standard_normal(16)
    np.testing.assert_allclose(t.inverse(t.forward(f)), f, atol=1e-12)
    assert TransformOperator("haar", 16).levels == 4


@pytest.mark.parametrize("n", [64, 256])
@pytest.mark.parametrize("segments", [1, 2, 4, 7])
def test_haar_sparsifies_piecewise_constant(rng, n, segments):
    cuts = np.sort(rng.choice(np.arange(1, n), size=segments - 1, replace=False))
    f = np.zeros(n)
    for seg, start in enumerate(np.concatenate([[0], cuts])):
        f[start:] = rng.standard_normal() + seg
    c = forward(TransformOperator("haar", n), f)
    assert np.sum(np.abs(c) > 1e-10) <= segments * (1 + np.log2(n))


def test_errors():
    with pytest.raises(ConfigError):
        TransformOperator("haar", 12)
    with pytest.raises(ConfigError):
        TransformOperator("fourier", 8)
    with pytest.raises(DimensionError):
        TransformOperator("dct", 8).forward(np.zeros(7))
