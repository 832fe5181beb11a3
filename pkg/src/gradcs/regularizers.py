"""The four-case l1 subgradient and the smoothed isotropic total variation.

Images are 2-D arrays indexed ``img[j, k]`` with row ``j`` and column ``k``.
Forward differences are zero on the last row (vertical) and last column
(horizontal).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError
from .solvers import StepMode


@dataclass(frozen=True)
class L1Params:
    lam: float = 0.005
    eps_zero: float = 1e-10
    decay: float = 0.995

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigError("lambda must be >= 0")
        if self.eps_zero <= 0:
            raise ConfigError("eps_zero must be > 0")
        if not 0 < self.decay <= 1:
            raise ConfigError("decay must be in (0, 1]")


@dataclass(frozen=True)
class TvParams:
    lam: float = 0.005
    eps_smooth: float = 1e-8
    decay: float = 1.0

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigError("lambda must be >= 0")
        if self.eps_smooth <= 0:
            raise ConfigError("eps_smooth must be > 0")
        if not 0 < self.decay <= 1:
            raise ConfigError("decay must be in (0, 1]")


def l1_subgradient(grad_l, f, p, lam=None):
    """Subgradient of ``L + lam * ||f||_1`` given ``grad_l = grad L(f)``.

    Entries with ``|f| >= eps_zero`` get ``g + lam * sign(f)``. Entries at
    (numerical) zero are shrunk toward zero by ``lam`` and set to exactly
    zero when ``|g| <= lam``. `lam` overrides ``p.lam`` (used by schedules).
    """
    g = np.asarray(grad_l, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if g.shape != f.shape:
        raise DimensionError(f"gradient shape {g.shape} != iterate shape {f.shape}")
    lam = p.lam if lam is None else lam
    active = np.abs(f) >= p.eps_zero
    shrunk = g - np.clip(g, -lam, lam)
    return np.where(active, g + lam * np.sign(f), shrunk)


def _differences(img):
    dv = np.zeros_like(img)
    dh = np.zeros_like(img)
    dv[:-1, :] = img[:-1, :] - img[1:, :]
    dh[:, :-1] = img[:, :-1] - img[:, 1:]
    return dv, dh


def _as_image(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise DimensionError(f"image must be a non-empty 2-D array, got shape {img.shape}")
    return img


def tv_value(img):
    """Exact isotropic total variation (no smoothing)."""
    dv, dh = _differences(_as_image(img))
    # hypot keeps subnormal differences from squaring to zero
    return float(np.hypot(dv, dh).sum())


def tv_smoothed(img, eps):
    """``sum sqrt(Dv^2 + Dh^2 + eps)``, the functional :func:`tv_gradient` differentiates."""
    dv, dh = _differences(_as_image(img))
    return float(np.sqrt(dv ** 2 + dh ** 2 + eps).sum())


def tv_gradient(img, p=None, eps=None):
    """Gradient of the smoothed total variation with respect to every pixel.

    Each pixel collects its own normalized differences minus the normalized
    vertical difference of the pixel above and the horizontal difference of
    the pixel to the left. `eps` overrides ``p.eps_smooth``; ``eps=0`` is
    allowed when no magnitude vanishes.
    """
    img = _as_image(img)
    if eps is None:
        eps = (p or TvParams()).eps_smooth
    dv, dh = _differences(img)
    mag = np.sqrt(dv ** 2 + dh ** 2 + eps) if eps > 0 else np.hypot(dv, dh)
    with np.errstate(invalid="ignore", divide="ignore"):
        nv = np.where(dv == 0, 0.0, dv / mag)
        nh = np.where(dh == 0, 0.0, dh / mag)
    grad = nv + nh
    grad[1:, :] -= nv[:-1, :]
    grad[:, 1:] -= nh[:, :-1]
    return grad


def lambda_schedule(p, mode, it):
    """Regularization weight at iteration `it` (0-based).

    Newton decays geometrically by ``p.decay``; other modes keep ``p.lam``.
    """
    if it < 0:
        raise ValueError("iteration index must be >= 0")
    if mode is StepMode.NEWTON or mode == StepMode.NEWTON.value:
        return p.lam * p.decay ** it
    return p.lam
