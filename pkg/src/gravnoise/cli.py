"""Command line entry point.

Verbs:

    gravnoise validate <config>
    gravnoise run <config> [--seed N] [--output-dir DIR]
    gravnoise sweep <config> --param section.key --values v1,v2,...

The environment variable GRAVNOISE_OUTDIR overrides the configured output
directory; an explicit --output-dir wins over both.  Exit codes: 0 success,
1 validation error, 2 runtime error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import override_config_text, parse_config, serialize_config
from .errors import ConfigError, GravNoiseError
from .runner import run_experiment

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravnoise",
        description="Stochastic-metric experiment runner",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_validate = sub.add_parser("validate", help="validate a config and echo it")
    p_validate.add_argument("config")

    p_run = sub.add_parser("run", help="run one experiment")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--output-dir", default=None, help="override the output directory")

    p_sweep = sub.add_parser("sweep", help="run the experiment over parameter values")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--param", required=True, help="config path, e.g. background.strain_rms")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--output-dir", default=None)
    return parser


def _load_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _resolve_output_dir(flag_value, config) -> str | None:
    if flag_value is not None:
        return flag_value
    return os.environ.get("GRAVNOISE_OUTDIR")


def _cmd_validate(args) -> int:
    config = parse_config(_load_text(args.config))
    sys.stdout.write(serialize_config(config))
    print("OK")
    return EXIT_OK


def _cmd_run(args) -> int:
    text = _load_text(args.config)
    if args.seed is not None:
        text = override_config_text(text, {"experiment.seed": str(args.seed)})
    config = parse_config(text)
    manifest = run_experiment(config, output_dir=_resolve_output_dir(args.output_dir, config))
    for name, digest in sorted(manifest.outputs.items()):
        print(f"{name}  sha256:{digest}")
    print(f"manifest: {os.path.join(manifest.output_dir, 'manifest.json')}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from .runner import write_json

    base_text = _load_text(args.config)
    if args.seed is not None:
        base_text = override_config_text(base_text, {"experiment.seed": str(args.seed)})
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError(["sweep: --values is empty"])

    base = parse_config(base_text)  # fail fast before any run
    root = _resolve_output_dir(args.output_dir, base) or base.output_dir
    entries = []
    for i, value in enumerate(values):
        text = override_config_text(base_text, {args.param: value})
        config = parse_config(text)
        subdir = os.path.join(root, f"sweep_{i:03d}")
        manifest = run_experiment(config, output_dir=subdir)
        entries.append(
            {
                "index": i,
                "param": args.param,
                "value": value,
                "output_dir": subdir,
                "outputs": manifest.outputs,
            }
        )
        print(f"[{i}] {args.param} = {value} -> {subdir}")
    os.makedirs(root, exist_ok=True)
    write_json(os.path.join(root, "sweep_summary.json"), {"runs": entries})
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "validate":
            return _cmd_validate(args)
        if args.verb == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GravNoiseError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
