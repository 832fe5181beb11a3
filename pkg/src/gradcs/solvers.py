"""Gradient iterations for ``min 1/2 ||M0 f - y||^2 + regularizer``.

Three step rules share one loop:

* fixed step ``f <- f - mu * d``;
* steepest descent, where ``mu`` is the exact line-search length of the
  least-squares part along its gradient;
* Newton, ``f <- f - (M0^T M0 + eps I)^{-1} d`` with the matrix factored once.

``d`` is the (sub)gradient of the full objective, produced by a regularizer
callback from the least-squares gradient. Signals may be 2-D arrays holding
one independent problem per column; each column gets its own step length.
"""

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import linalg as sla

from .errors import ConfigError, DimensionError, DivergenceError, NumericalError
from .sensing import as_observation

log = logging.getLogger(__name__)


class StepMode(str, Enum):
    FIXED = "fixed"
    STEEPEST = "steepest"
    NEWTON = "newton"


@dataclass(frozen=True)
class SolverConfig:
    """Iteration settings.

    `eps_newton` of ``None`` resolves to ``1e-4 * trace(M0^T M0) / N`` for the
    matrix at hand.
    """

    mode: StepMode = StepMode.STEEPEST
    fixed_mu: float | None = None
    eps_denominator: float = 1e-12
    eps_newton: float | None = None
    max_iters: int = 20000
    stop_tol: float = 1e-8
    log_every: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", StepMode(self.mode))
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.eps_denominator < 0:
            raise ConfigError("eps_denominator must be >= 0")
        if self.eps_newton is not None and self.eps_newton < 0:
            raise ConfigError("eps_newton must be >= 0")
        if self.mode is StepMode.FIXED and not (self.fixed_mu and self.fixed_mu > 0):
            raise ConfigError("fixed step mode needs fixed_mu > 0")

    def newton_eps(self, obs):
        if self.eps_newton is not None:
            return self.eps_newton
        return default_newton_eps(obs)


def default_newton_eps(obs):
    obs = as_observation(obs)
    return 1e-4 * float(np.sum(obs.mat ** 2)) / obs.n


@dataclass
class ConvergenceTrace:
    """Per-iteration records.

    For column-batched runs the arrays are ``(iterations, columns)`` and
    `lengths` holds how many leading rows are valid for each column.
    """

    residual: np.ndarray
    objective: np.ndarray
    delta: np.ndarray
    lengths: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.lengths is None:
            n = self.residual.shape[0]
            cols = 1 if self.residual.ndim == 1 else self.residual.shape[1]
            self.lengths = np.full(cols, n, dtype=np.int64)

    def __len__(self):
        return int(self.lengths.max()) if self.lengths.size else 0

    @property
    def iterations(self):
        return np.arange(1, self.residual.shape[0] + 1)

    @property
    def n_columns(self):
        return 1 if self.residual.ndim == 1 else self.residual.shape[1]

    def column(self, k):
        if self.residual.ndim == 1:
            if k != 0:
                raise IndexError(k)
            return self
        n = int(self.lengths[k])
        return ConvergenceTrace(self.residual[:n, k].copy(), self.objective[:n, k].copy(),
                                self.delta[:n, k].copy())

    def columns(self):
        return [self.column(k) for k in range(self.n_columns)]

    def to_csv(self, path):
        """Write ``iter,residual,objective,delta`` rows (single-column traces only)."""
        if self.residual.ndim != 1:
            raise DimensionError("split batched traces with column() before export")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iter", "residual", "objective", "delta"])
            for i, (r, o, d) in enumerate(zip(self.residual, self.objective, self.delta), 1):
                w.writerow([i, repr(float(r)), repr(float(o)), repr(float(d))])

    @classmethod
    def read_csv(cls, path):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 1].copy(), data[:, 2].copy(), data[:, 3].copy())


def grad_least_squares(obs, f, y):
    """``M0^T (M0 f - y)``, column-wise for 2-D inputs."""
    A = as_observation(obs).mat
    f = np.asarray(f, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if f.shape[0] != A.shape[1] or y.shape[0] != A.shape[0] or f.shape[1:] != y.shape[1:]:
        raise DimensionError(f"shapes incompatible: M0 {A.shape}, f {f.shape}, y {y.shape}")
    return A.T @ (A @ f - y)


def steepest_step(obs, g, eps=1e-12):
    """Exact line-search length ``<g, g> / (<g, M0^T M0 g> + eps)``.

    Returns a scalar for a vector `g` and one length per column for a matrix.
    A zero gradient gives a zero step.
    """
    A = as_observation(obs).mat
    g = np.asarray(g, dtype=np.float64)
    if g.shape[0] != A.shape[1]:
        raise DimensionError(f"gradient length {g.shape[0]} != matrix columns {A.shape[1]}")
    mu = _steepest(A, g, eps)
    return float(mu) if g.ndim == 1 else mu


def _steepest(A, g, eps):
    Ag = A @ g
    num = np.einsum("i...,i...->...", g, g)
    den = np.einsum("i...,i...->...", Ag, Ag) + eps
    safe = np.where(num > 0, den, 1.0)
    return np.where(num > 0, num / safe, 0.0)


class NewtonOperator:
    """Factored ``(M0^T M0 + eps I)``; :meth:`apply` multiplies by its inverse.

    For wide matrices (``M < N``) the ``M x M`` matrix ``M0 M0^T + eps I`` is
    factored instead and the inverse is applied through the Woodbury identity
    ``(A^T A + eps I)^{-1} = (I - A^T (A A^T + eps I)^{-1} A) / eps``.
    """

    def __init__(self, obs, eps):
        obs = as_observation(obs)
        if eps < 0:
            raise ConfigError("eps must be >= 0")
        A = obs.mat
        self.eps = float(eps)
        self._A = A
        m, n = A.shape
        self.wide = m < n and eps > 0
        if m < n and eps == 0:
            raise NumericalError("M0^T M0 is singular for M < N; use eps > 0")
        mat = A @ A.T if self.wide else obs.gram().copy()
        mat[np.diag_indices_from(mat)] += eps
        try:
            self._cho = sla.cho_factor(mat, lower=True, check_finite=False)
        except sla.LinAlgError as exc:
            raise NumericalError(f"Newton matrix factorization failed: {exc}") from exc

    def apply(self, v):
        v = np.asarray(v, dtype=np.float64)
        if v.shape[0] != self._A.shape[1]:
            raise DimensionError(f"vector length {v.shape[0]} != {self._A.shape[1]}")
        if not self.wide:
            return sla.cho_solve(self._cho, v, check_finite=False)
        A = self._A
        return (v - A.T @ sla.cho_solve(self._cho, A @ v, check_finite=False)) / self.eps


def newton_operator(obs, eps):
    return NewtonOperator(obs, eps)


class _Columns:
    """Forward/adjoint products for one shared matrix or one matrix per column."""

    def __init__(self, obs):
        if isinstance(obs, (list, tuple)):
            self.obs = [as_observation(o) for o in obs]
            shapes = {o.shape for o in self.obs}
            if len(shapes) != 1:
                raise DimensionError(f"per-column matrices differ in shape: {sorted(shapes)}")
            self.stack = np.stack([o.mat for o in self.obs])
            self.m, self.n = self.obs[0].shape
        else:
            self.obs = as_observation(obs)
            self.stack = None
            self.m, self.n = self.obs.shape

    def fwd(self, F, cols):
        if self.stack is None:
            return self.obs.mat @ F
        return np.matmul(self.stack[cols], F.T[:, :, None])[:, :, 0].T

    def adj(self, R, cols):
        if self.stack is None:
            return self.obs.mat.T @ R
        return np.matmul(R.T[:, None, :], self.stack[cols])[:, 0, :].T

    def steepest(self, g, cols, eps):
        Ag = self.fwd(g, cols)
        num = np.einsum("ij,ij->j", g, g)
        den = np.einsum("ij,ij->j", Ag, Ag) + eps
        safe = np.where(num > 0, den, 1.0)
        return np.where(num > 0, num / safe, 0.0)

    def newton(self, config, newton):
        if self.stack is None:
            return newton or NewtonOperator(self.obs, config.newton_eps(self.obs))
        return newton or [NewtonOperator(o, config.newton_eps(o)) for o in self.obs]


def _newton_apply(newton, d, cols):
    if isinstance(newton, NewtonOperator):
        return newton.apply(d)
    out = np.empty_like(d)
    for j, c in enumerate(np.arange(len(newton))[cols]):
        out[:, j] = newton[c].apply(d[:, j])
    return out


def iterate(config, obs, y, regularize=None, f0=None, objective=None, joint=False,
            newton=None):
    """Run the configured gradient iteration.

    Parameters
    ----------
    config : SolverConfig
    obs : ObservationMatrix, array_like, or sequence of them
        One matrix shared by all columns, or one matrix per column of `y`.
    y : array_like
        Measurements, ``(M,)`` or ``(M, C)`` for C independent columns.
    regularize : callable, optional
        ``regularize(f, grad_l, i) -> d`` maps the least-squares gradient to
        the search direction at iteration ``i`` (0-based). Defaults to ``d =
        grad_l``. Unless `joint`, it receives only still-active columns.
    f0 : array_like, optional
        Starting point, zeros by default.
    objective : callable, optional
        ``objective(f, r, i) -> value per column`` recorded in the trace;
        defaults to ``0.5 * ||r||^2``.
    joint : bool
        Treat all columns as one problem: stop on the Frobenius norm of the
        update and keep a single trace. Needed when `regularize` couples
        columns.
    newton : NewtonOperator or list of them, optional
        Prebuilt factorization(s) to reuse.

    Returns
    -------
    f : ndarray
    trace : ConvergenceTrace
    """
    ops = _Columns(obs)
    y = np.asarray(y, dtype=np.float64)
    vector = y.ndim == 1
    Y = y[:, None] if vector else y
    if Y.ndim != 2 or Y.shape[0] != ops.m:
        raise DimensionError(f"measurements shape {y.shape} incompatible with {ops.m} rows")
    ncol = Y.shape[1]
    if ops.stack is not None and ops.stack.shape[0] != ncol:
        raise DimensionError(f"{ops.stack.shape[0]} matrices for {ncol} columns")
    if f0 is None:
        F = np.zeros((ops.n, ncol))
    else:
        F = np.array(f0, dtype=np.float64, copy=True)
        F = F[:, None] if F.ndim == 1 else F
        if F.shape != (ops.n, ncol):
            raise DimensionError(f"f0 shape {np.shape(f0)} incompatible with ({ops.n}, {ncol})")
    if config.mode is StepMode.NEWTON:
        newton = ops.newton(config, newton)
    if objective is None:
        def objective(f, r, i):
            return 0.5 * np.einsum("ij,ij->j", r, r)

    ncols_trace = 1 if joint else ncol
    cap = min(config.max_iters, 1024)
    res_hist = np.zeros((cap, ncols_trace))
    obj_hist = np.zeros((cap, ncols_trace))
    del_hist = np.zeros((cap, ncols_trace))
    lengths = np.zeros(ncols_trace, dtype=np.int64)

    every = np.arange(ncol)
    active = every
    R = ops.fwd(F, every) - Y
    n_done = 0
    for i in range(config.max_iters):
        if i == cap:
            cap = min(2 * cap, config.max_iters)
            res_hist, obj_hist, del_hist = (np.resize(h, (cap, ncols_trace))
                                            for h in (res_hist, obj_hist, del_hist))
        cols = every if joint or active.size == ncol else active
        f = F[:, cols]
        g = ops.adj(R[:, cols], cols)
        d = g if regularize is None else regularize(f, g, i)
        if config.mode is StepMode.FIXED:
            step = config.fixed_mu * d
        elif config.mode is StepMode.STEEPEST:
            step = ops.steepest(g, cols, config.eps_denominator) * d
        else:
            step = _newton_apply(newton, d, cols)
        f_new = f - step
        r_new = ops.fwd(f_new, cols) - Y[:, cols]
        res = np.sqrt(np.einsum("ij,ij->j", r_new, r_new))
        dlt = np.sqrt(np.einsum("ij,ij->j", step, step))
        if not (np.isfinite(res.sum()) and np.isfinite(dlt.sum())
                and np.isfinite(np.einsum("ij,ij->", f_new, f_new))):
            trace = _trim(res_hist, obj_hist, del_hist, lengths, n_done, vector or joint)
            raise DivergenceError(f"non-finite iterate at iteration {i + 1}", trace)
        F[:, cols] = f_new
        R[:, cols] = r_new
        n_done = i + 1

        obj = objective(f_new, r_new, i)
        if joint:
            res_hist[i, 0] = np.sqrt(res @ res)
            obj_hist[i, 0] = np.sum(obj)
            dlt = np.sqrt(dlt @ dlt)
            del_hist[i, 0] = dlt
            lengths[0] = n_done
            done = dlt < config.stop_tol
        else:
            res_hist[i, cols] = res
            obj_hist[i, cols] = obj
            del_hist[i, cols] = dlt
            lengths[cols] = n_done
            active = cols[dlt >= config.stop_tol]
            done = active.size == 0
        if config.log_every and n_done % config.log_every == 0:
            log.info("iter %d residual %.3e", n_done, float(np.max(res_hist[i])))
        if done:
            break

    trace = _trim(res_hist, obj_hist, del_hist, lengths, n_done, vector or joint)
    return (F[:, 0] if vector else F), trace


def _trim(res, obj, dlt, lengths, n, flat):
    res, obj, dlt = res[:n], obj[:n], dlt[:n]
    if flat:
        return ConvergenceTrace(res[:, 0].copy(), obj[:, 0].copy(), dlt[:, 0].copy())
    return ConvergenceTrace(res.copy(), obj.copy(), dlt.copy(), lengths.copy())
