"""Command-line entry point: one subcommand per scenario.

Exit codes: 0 success, 2 configuration error, 3 runtime error.  Errors are
emitted as a one-line JSON record on stderr.  The environment variable
HOMSIM_THREADS caps internal parallelism (0 = auto, unset = serial); results
are identical regardless.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .scenarios import SCENARIOS, ConfigError, parse_config, run_scenario, write_output

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="JSON config file path or inline JSON text")
    sub.add_argument("--out", default="out", help="output directory (default: out)")
    sub.add_argument("--seed", type=int, default=None, help="RNG seed for all stochastic pieces")
    sub.add_argument("--format", choices=("csv", "json"), default=None, help="output file format")
    sub.add_argument("--nodes", type=int, default=None, help="detuning grid node count")
    sub.add_argument("--form", choices=("paper", "product"), default=None, help="coincidence integrand form")
    sub.add_argument("--envelope", choices=("gaussian", "unity"), default=None, help="visibility envelope kind")
    sub.add_argument("-p", type=int, choices=(1, 2), default=None, dest="p", help="envelope exponent")
    sub.add_argument(
        "--swap",
        choices=("exact", "bernoulli", "off"),
        default=None,
        help="SPDC detuning-swap mode (exact = deterministic half/half branches)",
    )


def _overrides(args: argparse.Namespace) -> dict:
    over: dict = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.format is not None:
        over["format"] = args.format
    if args.form is not None:
        over["form"] = args.form
    spectral = {}
    if args.nodes is not None:
        spectral["nodes"] = args.nodes
    if args.envelope is not None:
        spectral["envelope"] = args.envelope
    if args.p is not None:
        spectral["p"] = args.p
    if spectral:
        over["spectral"] = spectral
    if args.swap is not None:
        over["source"] = {"swap": "exact_half" if args.swap == "exact" else args.swap}
    return over


def _error_record(kind: str, exc: Exception) -> str:
    record = {"error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)}}
    key = getattr(exc, "key", None)
    if key is not None:
        record["error"]["key"] = key
    return json.dumps(record, sort_keys=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homsim",
        description="Coherence-optics simulator of Hong-Ou-Mandel anticorrelation",
    )
    parser.add_argument("--version", action="version", version=f"homsim {__version__}")
    subs = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sub = subs.add_parser(name, help=f"run the {name} scenario")
        _add_common(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, scenario=args.scenario, overrides=_overrides(args))
    except ConfigError as exc:
        print(_error_record("config", exc), file=sys.stderr)
        return EXIT_CONFIG
    try:
        output = run_scenario(cfg)
        paths = write_output(output, args.out, cfg.out_format)
    except ConfigError as exc:
        print(_error_record("config", exc), file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(_error_record("runtime", exc), file=sys.stderr)
        return EXIT_RUNTIME
    print(
        f"{cfg.scenario}: wrote {len(paths)} file(s) in {output.wall_time_s:.3f}s",
        file=sys.stderr,
    )
    for path in paths:
        print(str(path))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
