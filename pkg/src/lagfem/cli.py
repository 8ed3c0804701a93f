"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 step failure, 1 otherwise.
"""

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import load_config
from .convergence import run_refinement_study
from .errors import ConfigError, StepFailure
from .output import write_manifest, write_rates, write_run
from .runner import run
from .state import PRESETS

log = logging.getLogger("lagfem")


def _parse_betas(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--beta: cannot parse {text!r} as a comma-separated list") from exc
    if not values:
        raise ConfigError("--beta: empty list")
    if any(v < 0 for v in values):
        raise ConfigError("--beta: values must be nonnegative")
    return values


def _out_dir(args, cfg):
    return Path(args.out if args.out else cfg.output.directory)


def cmd_run(args):
    cfg = load_config(args.config)
    out = _out_dir(args, cfg)
    result = run(cfg)
    write_run(result, out)
    print(f"run complete: {result.trajectory.n_steps} steps, output in {out}")
    return 0


def _run_into(job):
    cfg, out = job
    write_run(run(cfg), out)
    return str(out)


def cmd_sweep(args):
    cfg = load_config(args.config)
    betas = _parse_betas(args.beta)
    out = _out_dir(args, cfg)
    jobs = [
        (cfg.with_updates(params={"beta": b}), out / f"beta_{b!r}")
        for b in betas
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            dirs = list(pool.map(_run_into, jobs))
    else:
        dirs = [_run_into(j) for j in jobs]
    for d in dirs:
        print(d)
    return 0


def cmd_converge(args):
    if args.levels < 3:
        raise ConfigError(f"--levels must be at least 3, got {args.levels}")
    cfg = load_config(args.config)
    out = _out_dir(args, cfg)
    os.makedirs(out, exist_ok=True)
    study = run_refinement_study(cfg, args.levels, max_workers=args.workers)
    write_rates(out / "rates.csv", study)
    write_manifest(
        out / "manifest.json", cfg,
        status="completed",
        levels=args.levels,
        resolutions=[r.N for r in study.results],
    )
    print(f"refinement study complete: {out / 'rates.csv'}")
    return 0


def cmd_presets(args):
    for name, desc in PRESETS.items():
        print(f"{name}: {desc}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="lagfem", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="progress lines on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="single run")
    r.add_argument("--config", required=True)
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("converge", help="self-convergence study")
    c.add_argument("--config", required=True)
    c.add_argument("--levels", type=int, required=True)
    c.add_argument("--out")
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_converge)

    s = sub.add_parser("sweep", help="independent runs over conductivity exponents")
    s.add_argument("--config", required=True)
    s.add_argument("--beta", required=True, help="comma-separated list, e.g. 0,0.5,1")
    s.add_argument("--out")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    q = sub.add_parser("presets", help="list initial-condition presets")
    q.set_defaults(func=cmd_presets)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except StepFailure as exc:
        print(f"step failure: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - mapped to exit code 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
