"""Desk-scale reproductions of the recovery experiments.

Each preset is a plain dict of settings; :func:`run_experiment` merges user
overrides into it, runs every (rows, trial) cell and optionally writes one
report directory per cell plus ``summary.csv``.

Trial ``t`` of an experiment seeded with ``s`` draws its observation matrix
with seed ``s + t``, the same for every row count, so row sweeps are paired.
"""

import copy
import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import imaging
from .errors import ConfigError
from .recovery import RecoveryProblem, acquire, recover_image
from .regularizers import L1Params, TvParams
from .sensing import generate_observation, stream
from .solvers import SolverConfig
from .transforms import TransformOperator

SUMMARY_COLUMNS = ["experiment", "rows", "trial", "seed", "psnr", "iterations", "elapsed_ms"]

PRESETS = {
    "diamond": {
        "rows": [10, 12, 15, 20],
        "distribution": "uniform01",
        "form": "a",
        "transform": "identity",
        "image": {"kind": "diamond", "size": 64},
        "regularizer": {"kind": "l1", "lambda": 0.01, "decay": 0.995},
        "solver": {"mode": "newton", "max_iters": 20000},
    },
    "circle": {
        "rows": [15, 20, 25, 30],
        "distribution": "uniform01",
        "form": "a",
        "transform": "identity",
        "image": {"kind": "circle", "size": 64},
        "regularizer": {"kind": "l1", "lambda": 0.005},
        "solver": {"mode": "steepest", "max_iters": 20000},
    },
    "geometric": {
        "rows": [20],
        "distribution": "uniform01",
        "form": "a",
        "transform": "identity",
        "image": {"kind": "geometric", "size": 64},
        "regularizer": {"kind": "tv", "lambda": 0.05, "eps_smooth": 1e-8},
        "solver": {"mode": "steepest", "max_iters": 20000},
        "psnr_peak": 255.0,
    },
    "general": {
        "rows": [100],
        "distribution": "normal01",
        "form": "c",
        "transform": "haar",
        "image": {"kind": "blocks", "size": 256},
        "regularizer": {"kind": "l1", "lambda": 0.01, "decay": 0.995},
        "solver": {"mode": "newton", "max_iters": 3000},
    },
}

_DEFAULTS = {"seed": 1, "trials": 1, "psnr_peak": 1.0, "output_dir": None}


def config_schema():
    """The JSON schema every experiment config is validated against."""
    text = resources.files("gradcs").joinpath("experiment_schema.json").read_text()
    return json.loads(text)


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def resolve_config(config):
    """Validate `config` and fill it in from its preset.

    Raises ``ConfigError`` on schema violations, including unknown keys.
    """
    try:
        jsonschema.validate(config, config_schema())
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid experiment config: {exc.message}") from exc
    name = config["experiment"]
    return _merge(_merge(_DEFAULTS, PRESETS[name]), config)


def _regularizer(spec):
    kind = spec.get("kind", "l1")
    if kind == "tv":
        return TvParams(lam=spec.get("lambda", 0.05), eps_smooth=spec.get("eps_smooth", 1e-8),
                        decay=spec.get("decay", 1.0))
    return L1Params(lam=spec.get("lambda", 0.005), eps_zero=spec.get("eps_zero", 1e-10),
                    decay=spec.get("decay", 0.995))


def _solver(spec):
    keys = ("mode", "fixed_mu", "eps_denominator", "eps_newton", "max_iters", "stop_tol",
            "log_every")
    return SolverConfig(**{k: spec[k] for k in keys if k in spec})


def load_image(spec):
    """Reference image for an experiment: a file when ``path`` is set, else synthetic."""
    if spec.get("path"):
        path = Path(spec["path"])
        if not path.exists():
            raise FileNotFoundError(path)
        return imaging.read_pgm(path)
    kind = spec.get("kind", "diamond")
    extra = {k: spec[k] for k in ("radius", "foreground", "background") if k in spec}
    for k in ("center", "square_corner"):
        if k in spec:
            extra[k] = tuple(spec[k])
    if "square_side" in spec:
        extra["square_side"] = spec["square_side"]
    return imaging.generate_test_image(imaging.TestImageSpec(kind, spec.get("size", 64), **extra))


@dataclass
class Cell:
    rows: int
    trial: int
    seed: int
    report: object


def run_experiment(config):
    """Run a (possibly partial) experiment config; returns the list of cells.

    With ``output_dir`` set, each cell is saved to
    ``<output_dir>/rows<M>_trial<t>/`` and a ``summary.csv`` is written.
    """
    cfg = resolve_config(config)
    img = load_image(cfg["image"])
    n = img.shape[0]
    psi = TransformOperator(cfg["transform"], n)
    reg = _regularizer(cfg["regularizer"])
    solver = _solver(cfg["solver"])
    cells = []
    for rows in cfg["rows"]:
        if rows > n:
            raise ConfigError(f"{rows} rows exceed signal length {n}")
        for t in range(cfg["trials"]):
            seed = cfg["seed"] + t
            obs = generate_observation(rows, n, cfg["distribution"], seed)
            y = acquire(cfg["form"], obs, img, psi)
            problem = RecoveryProblem(cfg["form"], obs, y, psi=psi, regularizer=reg)
            rep = recover_image(problem, solver, reference=img, peak=cfg["psnr_peak"])
            rep.meta.update(experiment=cfg["experiment"], trial=t, psnr_peak=cfg["psnr_peak"])
            cells.append(Cell(rows, t, seed, rep))
    if cfg.get("output_dir"):
        write_outputs(cfg, cells)
    return cells


def write_outputs(cfg, cells):
    out = Path(cfg["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    for c in cells:
        c.report.save(out / f"rows{c.rows}_trial{c.trial}")
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_COLUMNS)
        for c in cells:
            r = c.report
            w.writerow([cfg["experiment"], c.rows, c.trial, c.seed, repr(r.psnr_vs_reference),
                        r.total_iterations, round(1000.0 * r.elapsed, 3)])
    (out / "config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")


def median_psnr_by_rows(cells):
    rows = sorted({c.rows for c in cells})
    return {m: float(np.median([c.report.psnr_vs_reference for c in cells if c.rows == m]))
            for m in rows}


def sparse_signal(rng, n, k):
    """k-sparse vector: uniform support, standard normal values."""
    f = np.zeros(n)
    if k:
        f[rng.choice(n, size=k, replace=False)] = rng.standard_normal(k)
    return f


def phase_sweep(n, k_list, m_list, trials, seed, lam=0.01, max_iters=20000,
                dist="normal01", tol=1e-2):
    """Empirical success rate of l1 steepest-descent recovery on a (K, M) grid.

    Every trial draws its own matrix and signal from the stream keyed by
    ``(seed, K, M, trial)``. Success means relative l2 error below `tol`; a
    zero signal counts as recovered when the estimate is exactly zero.

    Returns an array ``rates[len(k_list), len(m_list)]``.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    config = SolverConfig("steepest", max_iters=max_iters)
    reg = L1Params(lam=lam)
    rates = np.zeros((len(k_list), len(m_list)))
    for a, k in enumerate(k_list):
        for b, m in enumerate(m_list):
            obs, sigs = [], []
            for t in range(trials):
                rng = stream(seed, k, m, t)
                obs.append(generate_observation(m, n, dist, int(rng.integers(2 ** 32))))
                sigs.append(sparse_signal(rng, n, k))
            F = np.column_stack(sigs)
            Y = np.column_stack([o.mat @ F[:, t] for t, o in enumerate(obs)])
            problem = RecoveryProblem("a", obs, Y, regularizer=reg)
            rec = recover_image(problem, config).recovered
            err = np.linalg.norm(rec - F, axis=0)
            scale = np.linalg.norm(F, axis=0)
            ok = np.where(scale > 0, err < tol * np.where(scale > 0, scale, 1.0), err == 0)
            rates[a, b] = ok.mean()
    return rates


def write_phase_csv(path, k_list, m_list, rates):
    """Grid CSV: header ``K,M=<m1>,M=<m2>,...``, one row per K."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["K"] + [f"M={m}" for m in m_list])
        for k, row in zip(k_list, rates):
            w.writerow([k] + [repr(float(v)) for v in row])
