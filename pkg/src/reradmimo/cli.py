"""Batch front end: ``reradmimo {point,sweep,svdist,bounds}``.

Settings are layered as defaults, then ``--config``, then ``RERADMIMO_*``
environment variables, then command-line flags. Exit codes: 0 ok,
2 config/input error, 3 data error, 4 numerical failure, 1 I/O error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__, experiments, output
from .config import config_items, parse_config
from .errors import ConfigError, DataError, InvalidInput, NumericalError, ParseError

ENV_PREFIX = "RERADMIMO_"
SUBCOMMANDS = ("point", "sweep", "svdist", "bounds")

# flag dest -> dotted config key
_FLAG_KEYS = {
    "seed": "run.seed",
    "trials": "run.trials",
    "mode": "run.mode",
    "schemes": "run.schemes",
    "threads": "run.threads",
    "frequency": "link.frequency_hz",
    "distance": "link.distance_m",
}
_ENV_ONLY = ("config", "output")


def bundled_scenario(name: str) -> Path:
    """Path of a bundled scenario, e.g. ``mmwave_winter`` or ``mmwave_winter.cfg``."""
    if not name.endswith(".cfg"):
        name += ".cfg"
    return Path(str(resources.files("reradmimo") / "data" / "scenarios" / name))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reradmimo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="config file, or the name of a bundled scenario")
    common.add_argument("--output", metavar="PATH", help="result CSV (default: <subcommand>.csv)")
    common.add_argument("--seed", metavar="U64")
    common.add_argument("--trials", metavar="N")
    common.add_argument("--mode", choices=("noise", "scattering"))
    common.add_argument("--schemes", metavar="LIST", help="comma-separated, e.g. BF,CL-MP,OL-MP")
    common.add_argument("--threads", metavar="N")
    common.add_argument("--frequency", metavar="HZ")
    common.add_argument("--distance", metavar="M")
    common.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key, e.g. sweep.points=20 (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "point": "capacity statistics at one operating point",
        "sweep": "capacity statistics along a sweep axis",
        "svdist": "singular-value histogram against the quarter-circle law",
        "bounds": "capacity bounds and limits over a K-factor grid",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=help_text[name])
    return parser


def _resolve_config_path(raw: str | None) -> Path | None:
    if raw is None:
        return None
    path = Path(raw)
    if path.exists():
        return path
    candidate = bundled_scenario(raw)
    if os.sep not in raw and candidate.exists():
        return candidate
    raise ParseError(f"{raw}: config file not found")


def _overrides(args, environ) -> list[tuple[str, str]]:
    pairs = []
    for dest, key in _FLAG_KEYS.items():
        env = environ.get(ENV_PREFIX + dest.upper())
        if env is not None:
            pairs.append((key, env))
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest)
        if value is not None:
            pairs.append((key, str(value)))
    for item in args.sets:
        key, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"--set expects KEY=VALUE, got {item!r}")
        pairs.append((key.strip(), value.strip()))
    return pairs


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _execute(command: str, cfg):
    """Returns (csv text, extra manifest results)."""
    if command == "point":
        return output.results_csv(experiments.run_point(cfg)), {}
    if command == "sweep":
        return output.results_csv(experiments.run_sweep(cfg)), {"sweep_axis": cfg.sweep.axis}
    if command == "svdist":
        hist = experiments.singular_value_histogram(cfg)
        centres = 0.5 * (hist.edges[:-1] + hist.edges[1:])
        qc = experiments.quarter_circle_density(centres)
        rows = zip(hist.edges[:-1].tolist(), hist.edges[1:].tolist(), hist.density.tolist(), qc.tolist())
        text = output.render_csv(output.HISTOGRAM_HEADER, rows)
        return text, {"ks_distance": hist.ks_distance, "samples": int(hist.samples.size)}
    rows = experiments.run_bounds(cfg)
    text = output.render_csv(output.BOUNDS_HEADER, (
        (r.k_factor, r.k_factor_db, r.n, r.snr_db, r.upper_bound, r.lower_bound, r.lower_bound_se,
         r.limit_high_absorption, r.limit_no_absorption, r.lower_trials, r.lower_scale, r.seed)
        for r in rows
    ))
    return text, {}


def run(argv=None, environ=None) -> int:
    environ = os.environ if environ is None else environ
    args = build_parser().parse_args(argv)
    for dest in _ENV_ONLY:
        if getattr(args, dest) is None:
            setattr(args, dest, environ.get(ENV_PREFIX + dest.upper()))
    out_path = Path(args.output or f"{args.command}.csv")
    try:
        cfg_path = _resolve_config_path(args.config)
        cfg = parse_config(cfg_path, _overrides(args, environ))
        inputs = [] if args.command == "bounds" else experiments.medium_files(cfg)
        started = _now()
        text, results = _execute(args.command, cfg)
        stopped = _now()
        output.atomic_write_text(out_path, text)
        digests = {str(p): output.sha256_file(p) for p in inputs}
        if cfg_path is not None:
            digests[str(cfg_path)] = output.sha256_file(cfg_path)
        output.write_manifest(out_path, {
            "tool": "reradmimo",
            "version": __version__,
            "subcommand": args.command,
            "seed": cfg.run.seed,
            "config": config_items(cfg),
            "config_file": None if cfg_path is None else str(cfg_path),
            "started_utc": started,
            "stopped_utc": stopped,
            "input_digests": digests,
            "output": str(out_path),
            "output_sha256": output.sha256_file(out_path),
            "results": results,
        })
    except (ConfigError, InvalidInput) as exc:
        print(f"reradmimo: config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"reradmimo: data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"reradmimo: numerical failure: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        where = exc.filename or out_path
        print(f"reradmimo: I/O error: {where}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"reradmimo: invalid input: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out_path}", file=sys.stderr)
    return 0


def main() -> None:
    sys.exit(run())
