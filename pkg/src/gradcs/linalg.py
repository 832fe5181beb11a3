"""Dense float64 vector/matrix kernels.

Vectors are 1-D ``numpy.ndarray`` and matrices 2-D C-ordered arrays. The
helpers here validate shapes and finiteness and raise package errors instead
of letting numpy broadcast silently.
"""

import warnings

import numpy as np
from scipy import linalg as sla

from .errors import DimensionError, FormatError, NumericalError


def as_vec(x, name="x"):
    """Return `x` as a finite 1-D float64 array."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains NaN or Inf")
    return v


def as_mat(a, name="A"):
    """Return `a` as a finite, C-contiguous 2-D float64 array."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf")
    return m


def _check_len(x, y):
    if x.shape != y.shape:
        raise DimensionError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")


def matvec(A, x):
    A = as_mat(A)
    x = as_vec(x)
    if A.shape[1] != x.shape[0]:
        raise DimensionError(f"matrix has {A.shape[1]} columns, vector has length {x.shape[0]}")
    return A @ x


def transpose_matvec(A, r):
    """Apply the transpose, ``A.T @ r``."""
    A = as_mat(A)
    r = as_vec(r, "r")
    if A.shape[0] != r.shape[0]:
        raise DimensionError(f"matrix has {A.shape[0]} rows, vector has length {r.shape[0]}")
    return A.T @ r


def dot(x, y):
    x, y = as_vec(x), as_vec(y, "y")
    _check_len(x, y)
    return float(x @ y)


def norm2(x):
    x = as_vec(x)
    return float(np.sqrt(x @ x))


def axpy(alpha, x, y):
    """Return ``alpha * x + y``."""
    x, y = as_vec(x), as_vec(y, "y")
    _check_len(x, y)
    return alpha * x + y


class SPDFactor:
    """Cholesky factorization of a symmetric positive definite matrix.

    Built once and applied to any number of right-hand sides, either a vector
    or a matrix whose columns are independent systems.
    """

    def __init__(self, A):
        A = as_mat(A)
        if A.shape[0] != A.shape[1]:
            raise DimensionError(f"SPD matrix must be square, got {A.shape}")
        self.n = A.shape[0]
        try:
            self._cho = sla.cho_factor(A, lower=True, check_finite=False)
        except sla.LinAlgError as exc:
            raise NumericalError(f"matrix is not positive definite: {exc}") from exc

    def solve(self, b):
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.n:
            raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {self.n}")
        return sla.cho_solve(self._cho, b, check_finite=False)


def solve_spd(A, b):
    """Solve ``A x = b`` for symmetric positive definite `A` by Cholesky."""
    return SPDFactor(A).solve(as_vec(b, "b"))


def write_csv(path, a):
    """Write a vector (one value per line) or matrix (one row per line)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    np.savetxt(path, a, delimiter=",", fmt="%.17g")


def read_csv(path):
    """Read a matrix written by :func:`write_csv` as a 2-D array."""
    try:
        with warnings.catch_warnings():
            # an empty file is reported below as a FormatError
            warnings.simplefilter("ignore", UserWarning)
            a = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
        return as_mat(a)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
