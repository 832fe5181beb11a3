"""Synthetic test images, PGM file I/O and PSNR.

Pixel values live on ``[0, 1]`` inside the package; files store integers
scaled by their ``maxval``.
"""

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionError, FormatError

PSNR_CAP = 300.0


class ImageKind(str, Enum):
    DIAMOND = "diamond"
    CIRCLE = "circle"
    GEOMETRIC = "geometric"
    BLOCKS = "blocks"


@dataclass(frozen=True)
class TestImageSpec:
    """Geometry of a synthetic image on an ``size x size`` grid.

    ``None`` geometry fields get defaults scaled to `size`:

    * diamond: centre ``size // 2``, half-width ``size // 2 - 4``;
    * circle: centre ``size // 2``, radius ``size // 2 - 8``;
    * geometric: disc at ``(0.3 size, 0.3 size)`` of radius ``0.18 size`` and
      a square of side ``0.3 size`` with top-left corner ``(0.55 size, 0.5 size)``.
    """

    __test__ = False

    kind: ImageKind
    size: int = 64
    center: tuple | None = None
    radius: int | None = None
    square_corner: tuple | None = None
    square_side: int | None = None
    foreground: float = 1.0
    background: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ImageKind(self.kind))
        if self.size < 8:
            raise ConfigError(f"image size must be >= 8, got {self.size}")


def generate_test_image(spec):
    """Rasterize `spec` into a ``size x size`` float array."""
    n = spec.size
    img = np.full((n, n), float(spec.background))
    fg = float(spec.foreground)
    if spec.kind is ImageKind.DIAMOND:
        cj, ck = spec.center or (n // 2, n // 2)
        h = spec.radius if spec.radius is not None else n // 2 - 4
        _check_box(n, cj - h, cj + h, ck - h, ck + h)
        for k in range(ck - h, ck + h + 1):
            off = h - abs(k - ck)
            img[cj - off, k] = fg
            img[cj + off, k] = fg
    elif spec.kind is ImageKind.CIRCLE:
        cj, ck = spec.center or (n // 2, n // 2)
        r = spec.radius if spec.radius is not None else n // 2 - 8
        _check_box(n, cj - r, cj + r, ck - r, ck + r)
        for dj, dk in _midpoint_circle(r):
            img[cj + dj, ck + dk] = fg
    elif spec.kind is ImageKind.GEOMETRIC:
        cj, ck = spec.center or (round(0.3 * n), round(0.3 * n))
        r = spec.radius if spec.radius is not None else round(0.18 * n)
        sj, sk = spec.square_corner or (round(0.55 * n), round(0.5 * n))
        side = spec.square_side if spec.square_side is not None else round(0.3 * n)
        _check_box(n, cj - r, cj + r, ck - r, ck + r)
        _check_box(n, sj, sj + side - 1, sk, sk + side - 1)
        jj, kk = np.mgrid[0:n, 0:n]
        disc = (jj - cj) ** 2 + (kk - ck) ** 2 <= r * r
        square = (jj >= sj) & (jj < sj + side) & (kk >= sk) & (kk < sk + side)
        if np.any(disc & square):
            raise ConfigError("disc and square overlap")
        img[disc | square] = fg
    else:
        img = blocks_image(n)
    return img


def _check_box(n, j0, j1, k0, k1):
    if j0 < 0 or k0 < 0 or j1 >= n or k1 >= n:
        raise ConfigError(f"shape extends outside the {n}x{n} grid")


def _midpoint_circle(r):
    """Offsets of the midpoint-algorithm circle of radius `r`."""
    pts = set()
    x, y, err = r, 0, 1 - r
    while x >= y:
        for a, b in ((x, y), (y, x)):
            pts.update({(a, b), (-a, b), (a, -b), (-a, -b)})
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    return sorted(pts)


def blocks_image(n=256):
    """Piecewise-constant stand-in for a natural image.

    A mid-grey background with a bright rectangle, a dark disc and a thin
    bar; few intensity jumps per column, hence sparse in the Haar domain.
    """
    jj, kk = np.mgrid[0:n, 0:n] / n
    img = np.full((n, n), 0.4)
    img[(jj >= 0.15) & (jj < 0.55) & (kk >= 0.1) & (kk < 0.45)] = 0.9
    img[(jj - 0.68) ** 2 + (kk - 0.68) ** 2 <= 0.2 ** 2] = 0.1
    img[(jj >= 0.8) & (jj < 0.9) & (kk >= 0.05) & (kk < 0.4)] = 0.7
    return img


def psnr(a, b, peak=1.0):
    """``10 log10(peak^2 / MSE)`` in dB; identical inputs give ``PSNR_CAP``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"image shapes differ: {a.shape} vs {b.shape}")
    if peak <= 0:
        raise ValueError("peak must be > 0")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0:
        return PSNR_CAP
    return min(PSNR_CAP, 10.0 * np.log10(peak * peak / mse))


def write_pgm(img, path, maxval=255, plain=False):
    """Write `img` (clamped to [0, 1]) as binary P5 or, with `plain`, ASCII P2."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise DimensionError(f"image must be 2-D, got shape {img.shape}")
    if not 1 <= maxval <= 65535:
        raise ValueError("maxval must be in [1, 65535]")
    q = np.rint(np.clip(img, 0.0, 1.0) * maxval).astype(np.int64)
    rows, cols = q.shape
    header = f"{'P2' if plain else 'P5'}\n{cols} {rows}\n{maxval}\n"
    path = Path(path)
    if plain:
        body = "\n".join(" ".join(str(v) for v in row) for row in q) + "\n"
        path.write_text(header + body)
    else:
        dtype = ">u2" if maxval > 255 else "u1"
        path.write_bytes(header.encode("ascii") + q.astype(dtype).tobytes())


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_pgm(path):
    """Read a P2 or P5 PGM into a float array scaled to [0, 1]."""
    data = Path(path).read_bytes()
    pos = 0
    fields = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise FormatError(f"{path}: truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    magic = fields[0]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: unsupported magic {magic!r}")
    try:
        cols, rows, maxval = (int(f) for f in fields[1:])
    except ValueError as exc:
        raise FormatError(f"{path}: malformed PGM header") from exc
    if cols < 1 or rows < 1 or not 1 <= maxval <= 65535:
        raise FormatError(f"{path}: invalid PGM dimensions or maxval")
    count = rows * cols
    if magic == b"P5":
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        body = data[pos + 1:pos + 1 + count * dtype.itemsize]
        if len(body) != count * dtype.itemsize:
            raise FormatError(f"{path}: truncated pixel data")
        vals = np.frombuffer(body, dtype=dtype).astype(np.int64)
    else:
        try:
            vals = np.array(data[pos:].split(), dtype=np.int64)
        except ValueError as exc:
            raise FormatError(f"{path}: non-integer pixel value") from exc
        if vals.size != count:
            raise FormatError(f"{path}: expected {count} pixels, found {vals.size}")
    if np.any(vals > maxval):
        raise FormatError(f"{path}: pixel exceeds maxval")
    return vals.reshape(rows, cols) / maxval
