import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradcs import linalg
from gradcs.errors import DimensionError, FormatError, NumericalError


@pytest.mark.parametrize("A, x, expected", [
    (np.eye(2), [3, 4], [3, 4]),
    ([[1, 1, 1]], [2, 5, -1], [6]),
    ([[2, 0], [0, 3]], [1, 1], [2, 3]),
])
def test_matvec(A, x, expected):
    np.testing.assert_array_equal(linalg.matvec(A, x), expected)


@pytest.mark.parametrize("A, r, expected", [
    (np.eye(2), [1, 2], [1, 2]),
    ([[1, 0, 2]], [3], [3, 0, 6]),
    ([[1, 1], [1, -1]], [1, 1], [2, 0]),
])
def test_transpose_matvec(A, r, expected):
    np.testing.assert_array_equal(linalg.transpose_matvec(A, r), expected)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        linalg.matvec(np.eye(2), [1, 2, 3])
    with pytest.raises(DimensionError):
        linalg.transpose_matvec(np.eye(2), [1])
    with pytest.raises(DimensionError):
        linalg.dot([1, 2], [1])
    with pytest.raises(DimensionError):
        linalg.axpy(1.0, [1, 2], [1])


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        linalg.as_vec([1.0, np.nan])
    with pytest.raises(ValueError):
        linalg.as_mat([[np.inf]])


@pytest.mark.parametrize("A, b, expected", [
    (np.eye(2), [5, -2], [5, -2]),
    (np.diag([1.1, 0.1]), [1.1, 0.1], [1, 1]),
    ([[2, 1], [1, 2]], [3, 3], [1, 1]),
])
def test_solve_spd(A, b, expected):
    x = linalg.solve_spd(A, b)
    np.testing.assert_allclose(x, expected, rtol=1e-12)
    assert np.linalg.norm(np.asarray(A) @ x - b) <= 1e-10 * (1 + np.linalg.norm(b))


def test_solve_spd_rejects_indefinite():
    with pytest.raises(NumericalError):
        linalg.solve_spd([[1.0, 2.0], [2.0, 1.0]], [1.0, 1.0])


def test_small_kernels():
    assert linalg.dot([1, 2], [3, 4]) == 11
    assert linalg.norm2([3, 4]) == 5
    np.testing.assert_array_equal(linalg.axpy(2, [1, 0], [0, 1]), [2, 1])


@settings(max_examples=50, deadline=None)
@given(m=st.integers(1, 20), n=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
def test_adjoint_identity(m, n, seed):
    rng = np.random.default_rng(seed)
    A, x, r = rng.standard_normal((m, n)), rng.standard_normal(n), rng.standard_normal(m)
    lhs = linalg.dot(linalg.matvec(A, x), r)
    rhs = linalg.dot(x, linalg.transpose_matvec(A, r))
    scale = np.abs(A).sum() * np.abs(x).max() * np.abs(r).max()
    assert abs(lhs - rhs) <= 1e-10 * scale


@pytest.mark.parametrize("n", [2, 17, 64, 256])
def test_solve_spd_recovers_x(rng, n):
    B = rng.standard_normal((n, n))
    A = B @ B.T + n * np.eye(n)
    x = rng.standard_normal(n)
    got = linalg.solve_spd(A, A @ x)
    assert np.linalg.norm(got - x) <= 1e-8 * np.linalg.norm(x)


def test_kernels_deterministic(rng):
    A, x = rng.standard_normal((30, 40)), rng.standard_normal(40)
    assert linalg.matvec(A, x).tobytes() == linalg.matvec(A, x).tobytes()
    S = A.T @ A + np.eye(40)
    assert linalg.solve_spd(S, x).tobytes() == linalg.solve_spd(S, x).tobytes()


def test_csv_round_trip(tmp_path, rng):
    A = rng.standard_normal((3, 5)) * 1e-3
    path = tmp_path / "a.csv"
    linalg.write_csv(path, A)
    np.testing.assert_array_equal(linalg.read_csv(path), A)
    first = path.read_text().splitlines()[0].split(",")
    assert len(first) == 5


def test_csv_malformed(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,abc\n")
    with pytest.raises(FormatError):
        linalg.read_csv(path)
