"""Random observation matrices, measurement, and empirical RIP/coherence checks.

Random numbers come from NumPy's Philox-4x64 counter-based generator. Every
matrix column ``j`` gets its own stream keyed by ``SeedSequence(seed,
spawn_key=(j,))``, and RIP trial ``t`` uses ``spawn_key=(t,)``, so results do
not depend on evaluation order or worker scheduling.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from . import linalg
from .errors import DimensionError, FormatError, NumericalError


class Distribution(str, Enum):
    NORMAL01 = "normal01"
    UNIFORM01 = "uniform01"
    BERNOULLI_PM1 = "bernoulli_pm1"


def stream(seed, *key):
    """Independent Philox generator for ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _draw(rng, dist, size):
    if dist is Distribution.NORMAL01:
        return rng.standard_normal(size)
    if dist is Distribution.UNIFORM01:
        return rng.random(size)
    return 2.0 * rng.integers(0, 2, size=size).astype(np.float64) - 1.0


@dataclass(frozen=True, eq=False)
class ObservationMatrix:
    """An ``M x N`` measurement operator and where it came from.

    `distribution` and `seed` are ``None`` for matrices supplied by hand.
    """

    mat: np.ndarray
    distribution: Distribution | None = None
    seed: int | None = None
    _gram: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        mat = linalg.as_mat(self.mat, "observation matrix")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        if self.distribution is not None:
            object.__setattr__(self, "distribution", Distribution(self.distribution))

    @property
    def shape(self):
        return self.mat.shape

    @property
    def m(self):
        return self.mat.shape[0]

    @property
    def n(self):
        return self.mat.shape[1]

    def gram(self):
        """Cached ``mat.T @ mat``."""
        if "g" not in self._gram:
            g = self.mat.T @ self.mat
            g.setflags(write=False)
            self._gram["g"] = g
        return self._gram["g"]

    def sidecar(self):
        return {"m": self.m, "n": self.n,
                "dist": None if self.distribution is None else self.distribution.value,
                "seed": self.seed}

    def save(self, csv_path):
        """Write ``<name>.csv`` and the JSON sidecar ``<name>.json`` next to it."""
        csv_path = Path(csv_path)
        linalg.write_csv(csv_path, self.mat)
        csv_path.with_suffix(".json").write_text(json.dumps(self.sidecar(), indent=2) + "\n")

    @classmethod
    def load(cls, csv_path):
        """Read a matrix CSV; when a sidecar exists, check it against regeneration."""
        csv_path = Path(csv_path)
        mat = linalg.read_csv(csv_path)
        side = csv_path.with_suffix(".json")
        if not side.exists():
            return cls(mat)
        try:
            meta = json.loads(side.read_text())
            m, n = int(meta["m"]), int(meta["n"])
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(f"{side}: bad sidecar: {exc}") from exc
        if mat.shape != (m, n):
            raise FormatError(f"{csv_path}: shape {mat.shape} disagrees with sidecar ({m}, {n})")
        if meta.get("dist") is None:
            return cls(mat)
        regen = generate_observation(m, n, meta["dist"], meta["seed"])
        if not np.array_equal(regen.mat, mat):
            raise FormatError(f"{csv_path}: contents do not match regeneration from sidecar")
        return regen


def as_observation(obs):
    return obs if isinstance(obs, ObservationMatrix) else ObservationMatrix(obs)


def generate_observation(m, n, dist, seed):
    """Draw an ``m x n`` random matrix, column by column, from per-column streams."""
    if m < 1 or n < 1:
        raise DimensionError(f"matrix dimensions must be positive, got {m}x{n}")
    dist = Distribution(dist)
    mat = np.empty((m, n))
    for j in range(n):
        mat[:, j] = _draw(stream(seed, j), dist, m)
    return ObservationMatrix(mat, dist, int(seed))


def measure(obs, f):
    """Measurements ``y = M0 @ f``; `f` may hold one signal per column."""
    obs = as_observation(obs)
    f = np.asarray(f, dtype=np.float64)
    if f.ndim == 1:
        return linalg.matvec(obs.mat, f)
    if f.ndim != 2 or f.shape[0] != obs.n:
        raise DimensionError(f"signal shape {f.shape} incompatible with matrix {obs.shape}")
    return obs.mat @ f


@dataclass(frozen=True)
class RipEstimate:
    min_ratio: float
    max_ratio: float
    trials: int
    sparsity_k: int


def sparse_unit_vector(rng, n, k):
    """Random k-sparse unit vector: uniform support, normal values."""
    f = np.zeros(n)
    support = rng.choice(n, size=k, replace=False)
    vals = rng.standard_normal(k)
    while not np.any(vals):
        vals = rng.standard_normal(k)
    f[support] = vals
    return f / np.linalg.norm(f)


def rip_ratio_estimate(obs, k, trials, seed):
    """Min and max of ``||M0 f||^2 / ||f||^2`` over random k-sparse unit vectors."""
    obs = as_observation(obs)
    if not 1 <= k <= obs.n:
        raise DimensionError(f"sparsity k={k} outside [1, {obs.n}]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ratios = np.empty(trials)
    for t in range(trials):
        f = sparse_unit_vector(stream(seed, t), obs.n, k)
        y = obs.mat @ f
        ratios[t] = (y @ y) / (f @ f)
    return RipEstimate(float(ratios.min()), float(ratios.max()), trials, k)


def coherence_index(psi, obs):
    """``sqrt(N) * max |<row_j / ||row_j||, psi_k>|`` over rows of M0 and basis vectors.

    The basis vectors are the columns of ``Psi.T``, i.e. the rows of the
    transform matrix. The result lies in ``[1, sqrt(N)]``.
    """
    obs = as_observation(obs)
    if psi.n != obs.n:
        raise DimensionError(f"transform size {psi.n} != matrix columns {obs.n}")
    norms = np.linalg.norm(obs.mat, axis=1)
    if np.any(norms == 0):
        raise NumericalError("observation matrix has a zero row")
    rows = obs.mat / norms[:, None]
    # <row_j, psi_k> for all j, k: (Psi @ row_j)_k
    inner = psi.forward(rows.T)
    return float(np.sqrt(obs.n) * np.abs(inner).max())
