"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 missing
resource (e.g. the user-supplied image for the ``general`` experiment).
The ``CS_SEED`` environment variable supplies the default ``--seed``.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments, imaging, linalg
from .errors import ConfigError, DimensionError, FormatError
from .recovery import RecoveryProblem, acquire, add_measurement_noise, recover_image
from .regularizers import L1Params, TvParams
from .sensing import ObservationMatrix, coherence_index, generate_observation
from .solvers import SolverConfig
from .transforms import TransformOperator

EXIT_USAGE, EXIT_IO, EXIT_MISSING = 1, 2, 3

IMAGE_NOTE = ("the general experiment needs a user-supplied 256x256 grayscale PGM "
              "(e.g. Cameraman or Boats); pass --image PATH, or --synthetic for the "
              "built-in piecewise-constant stand-in")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed():
    return int(os.environ.get("CS_SEED", "1"))


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _load_signal(path):
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return imaging.read_pgm(path)
    a = linalg.read_csv(path)
    return a[:, 0] if a.shape[1] == 1 else a


def cmd_gen_matrix(args):
    obs = generate_observation(args.m, args.n, args.dist, args.seed)
    obs.save(args.out)
    print(f"wrote {args.out} and {Path(args.out).with_suffix('.json')}")


def cmd_measure(args):
    obs = ObservationMatrix.load(args.matrix)
    f = _load_signal(args.signal)
    psi = TransformOperator(args.transform, obs.n)
    y = acquire(args.form, obs, f, psi)
    if args.noise:
        y = add_measurement_noise(y, args.noise, args.seed)
    linalg.write_csv(args.out, y)
    print(f"wrote {args.out}")


def _solver_from(args):
    return SolverConfig(args.mode, fixed_mu=args.fixed_mu, max_iters=args.iters,
                        stop_tol=args.stop_tol, eps_newton=args.eps_newton,
                        log_every=args.log_every)


def cmd_recover(args):
    obs = ObservationMatrix.load(args.matrix)
    y = linalg.read_csv(args.measurements)
    psi = TransformOperator(args.transform, obs.n)
    if args.regularizer == "tv":
        reg = TvParams(lam=args.lam if args.lam is not None else 0.05)
    else:
        reg = L1Params(lam=args.lam if args.lam is not None else 0.005, decay=args.decay)
    problem = RecoveryProblem(args.form, obs, y, psi=psi, regularizer=reg)
    ref = _load_signal(args.reference) if args.reference else None
    if ref is not None and ref.ndim == 1:
        ref = ref[:, None]
    rep = recover_image(problem, _solver_from(args), reference=ref, peak=args.peak)
    rep.save(args.out)
    print(json.dumps(rep.to_json()))


def cmd_experiment(args):
    config = {}
    if args.config:
        config = json.loads(Path(args.config).read_text())
    if args.preset:
        config["experiment"] = args.preset
    if "experiment" not in config:
        raise UsageError("give a preset name or a --config file with an 'experiment' key")
    if args.seed is not None:
        config["seed"] = args.seed
    elif "seed" not in config:
        config["seed"] = _default_seed()
    if args.trials is not None:
        config["trials"] = args.trials
    if args.rows:
        config["rows"] = args.rows
    if args.iters is not None:
        config.setdefault("solver", {})["max_iters"] = args.iters
    if args.peak is not None:
        config["psnr_peak"] = args.peak
    if args.out:
        config["output_dir"] = args.out
    if args.image:
        if not Path(args.image).exists():
            print(f"error: image not found: {args.image}; {IMAGE_NOTE}", file=sys.stderr)
            return EXIT_MISSING
        config.setdefault("image", {})["path"] = args.image
    if config["experiment"] == "general" and not args.synthetic \
            and not config.get("image", {}).get("path"):
        print(f"error: {IMAGE_NOTE}", file=sys.stderr)
        return EXIT_MISSING
    cells = experiments.run_experiment(config)
    for c in cells:
        print(f"rows={c.rows} trial={c.trial} seed={c.seed} "
              f"psnr={c.report.psnr_vs_reference:.4f} iterations={c.report.total_iterations}")
    return 0


def cmd_phase_sweep(args):
    rates = experiments.phase_sweep(args.n, args.k, args.m, args.trials, args.seed,
                                    lam=args.lam, max_iters=args.iters, dist=args.dist)
    experiments.write_phase_csv(args.out, args.k, args.m, rates)
    for k, row in zip(args.k, rates):
        print(f"K={k}: " + " ".join(f"{v:.2f}" for v in row))


def cmd_coherence(args):
    obs = ObservationMatrix.load(args.matrix)
    print(f"{coherence_index(TransformOperator(args.psi, obs.n), obs):.6f}")


def cmd_psnr(args):
    a, b = imaging.read_pgm(args.a), imaging.read_pgm(args.b)
    print(f"{imaging.psnr(a, b, args.peak):.4f}")


def build_parser():
    p = _Parser(prog="gradcs", description="Gradient-based compressive sensing recovery.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress lines")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-matrix", help="generate a seeded observation matrix")
    g.add_argument("--m", type=_positive, required=True)
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--dist", choices=["normal01", "uniform01", "bernoulli_pm1"], default="normal01")
    g.add_argument("--seed", type=int, default=_default_seed())
    g.add_argument("--out", required=True, help="CSV path; the JSON sidecar goes next to it")
    g.set_defaults(func=cmd_gen_matrix)

    m = sub.add_parser("measure", help="measure a signal (CSV) or image (PGM)")
    m.add_argument("--matrix", required=True)
    m.add_argument("--signal", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--form", choices=list("abcd"), default="a")
    m.add_argument("--transform", choices=["identity", "dct", "haar"], default="identity")
    m.add_argument("--noise", type=float, default=0.0, help="Gaussian noise sigma")
    m.add_argument("--seed", type=int, default=_default_seed())
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("recover", help="recover a signal or image from measurements")
    r.add_argument("--matrix", required=True)
    r.add_argument("--measurements", required=True)
    r.add_argument("--out", required=True, help="report directory")
    r.add_argument("--form", choices=list("abcd"), default="a")
    r.add_argument("--transform", choices=["identity", "dct", "haar"], default="identity")
    r.add_argument("--regularizer", choices=["l1", "tv"], default="l1")
    r.add_argument("--lambda", dest="lam", type=float, default=None)
    r.add_argument("--decay", type=float, default=0.995)
    r.add_argument("--mode", choices=["fixed", "steepest", "newton"], default="steepest")
    r.add_argument("--fixed-mu", type=float, default=None)
    r.add_argument("--iters", type=_positive, default=20000)
    r.add_argument("--stop-tol", type=float, default=1e-8)
    r.add_argument("--eps-newton", type=float, default=None)
    r.add_argument("--log-every", type=int, default=0)
    r.add_argument("--reference", help="ground truth (PGM or CSV) for PSNR")
    r.add_argument("--peak", type=float, default=1.0)
    r.set_defaults(func=cmd_recover)

    e = sub.add_parser("experiment", help="run a preset experiment")
    e.add_argument("preset", nargs="?", choices=sorted(experiments.PRESETS))
    e.add_argument("--config", help="JSON config; flags override it")
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--trials", type=_positive, default=None)
    e.add_argument("--rows", type=_positive, nargs="+")
    e.add_argument("--iters", type=_positive, default=None)
    e.add_argument("--peak", type=float, default=None)
    e.add_argument("--image", help="input PGM for the general experiment")
    e.add_argument("--synthetic", action="store_true",
                   help="general experiment: use the built-in synthetic image")
    e.add_argument("--out", help="output directory")
    e.set_defaults(func=cmd_experiment)

    s = sub.add_parser("phase-sweep", help="success rate over (K, M)")
    s.add_argument("--n", type=_positive, default=64)
    s.add_argument("--k", type=int, nargs="+", required=True)
    s.add_argument("--m", type=_positive, nargs="+", required=True)
    s.add_argument("--trials", type=_positive, default=50)
    s.add_argument("--seed", type=int, default=_default_seed())
    s.add_argument("--lambda", dest="lam", type=float, default=0.01)
    s.add_argument("--iters", type=_positive, default=20000)
    s.add_argument("--dist", choices=["normal01", "uniform01", "bernoulli_pm1"], default="normal01")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_phase_sweep)

    c = sub.add_parser("coherence", help="coherence index of a basis and a matrix")
    c.add_argument("--psi", choices=["identity", "dct", "haar"], default="identity")
    c.add_argument("--matrix", required=True)
    c.set_defaults(func=cmd_coherence)

    q = sub.add_parser("psnr", help="PSNR between two PGM images")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--peak", type=float, default=1.0)
    q.set_defaults(func=cmd_psnr)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args) or 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
