"""Orthonormal sparsifying bases: identity, DCT-II and the Haar wavelet.

All transforms act along axis 0, so a 2-D array is transformed column by
column. That is how images are handled throughout the package; there is no
separable 2-D transform.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import fft

from .errors import ConfigError, DimensionError

_SQRT1_2 = np.sqrt(0.5)


class TransformKind(str, Enum):
    IDENTITY = "identity"
    DCT = "dct"
    HAAR = "haar"


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TransformOperator:
    """An orthonormal basis of R^n.

    Parameters
    ----------
    kind : TransformKind or str
        ``"identity"``, ``"dct"`` (orthonormal DCT-II) or ``"haar"``.
    n : int
        Signal length. Haar needs a power of two.
    levels : int, optional
        Haar decomposition depth; ``None`` means the full depth ``log2(n)``.
    """

    kind: TransformKind
    n: int
    levels: int | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", TransformKind(self.kind))
        except ValueError as exc:
            raise ConfigError(f"unknown transform kind {self.kind!r}") from exc
        if self.n < 1:
            raise DimensionError(f"transform size must be >= 1, got {self.n}")
        if self.kind is TransformKind.HAAR:
            if not _is_pow2(self.n):
                raise ConfigError(f"Haar transform needs a power-of-two length, got {self.n}")
            full = self.n.bit_length() - 1
            levels = full if self.levels is None else self.levels
            if not 0 <= levels <= full:
                raise ConfigError(f"Haar levels must be in [0, {full}], got {levels}")
            object.__setattr__(self, "levels", levels)

    def _check(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[0] != self.n:
            raise DimensionError(f"expected length {self.n} along axis 0, got shape {x.shape}")
        return x

    def forward(self, f):
        """Coefficients ``Psi @ f``."""
        f = self._check(f)
        if self.kind is TransformKind.IDENTITY:
            return f.copy()
        if self.kind is TransformKind.DCT:
            return fft.dct(f, type=2, norm="ortho", axis=0)
        return _haar_forward(f, self.levels)

    def inverse(self, c):
        """Signal ``Psi.T @ c``."""
        c = self._check(c)
        if self.kind is TransformKind.IDENTITY:
            return c.copy()
        if self.kind is TransformKind.DCT:
            return fft.idct(c, type=2, norm="ortho", axis=0)
        return _haar_inverse(c, self.levels)

    @cached_property
    def matrix(self):
        m = self.forward(np.eye(self.n))
        m.setflags(write=False)
        return m

    def as_matrix(self):
        """Explicit ``n x n`` matrix whose action equals :meth:`forward`."""
        return self.matrix.copy()


# Coefficient layout: [approx_L, detail_L, detail_{L-1}, ..., detail_1],
# detail = (even - odd) / sqrt(2).
def _haar_forward(f, levels):
    out = f.copy()
    n = f.shape[0]
    for _ in range(levels):
        even = out[0:n:2].copy()
        odd = out[1:n:2].copy()
        half = n // 2
        out[:half] = (even + odd) * _SQRT1_2
        out[half:n] = (even - odd) * _SQRT1_2
        n = half
    return out


def _haar_inverse(c, levels):
    out = c.copy()
    n = c.shape[0] >> levels
    for _ in range(levels):
        approx = out[:n].copy()
        detail = out[n:2 * n].copy()
        out[0:2 * n:2] = (approx + detail) * _SQRT1_2
        out[1:2 * n:2] = (approx - detail) * _SQRT1_2
        n *= 2
    return out


def forward(t, f):
    return t.forward(f)


def inverse(t, c):
    return t.inverse(c)


def as_matrix(t):
    return t.as_matrix()
