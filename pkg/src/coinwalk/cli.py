"""``simulate``: run experiment configs and write CSV time series.

Exit codes: 0 success, 1 configuration or output error, 2 numerical guard.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .experiments import (
    PRESETS,
    RUNNERS,
    ConfigError,
    check_output_dir,
    emit_csv,
    load_configs,
    write_manifest,
)
from .walker import NumericalGuardError

log = logging.getLogger("coinwalk")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Quantum walker coupled to a baker-map environment: batch runs to CSV.",
    )
    parser.add_argument("--config", help="INI file with one section per run")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="built-in run (file keys override it)")
    parser.add_argument("--out", default="results", help="output directory (default: results)")
    parser.add_argument("--threads", type=int, default=1, help="members simulated concurrently")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.config is None and args.preset is None:
        print("error: give --config and/or --preset", file=sys.stderr)
        return 1
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 1
    try:
        configs = load_configs(args.config, args.preset)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        out = check_output_dir(args.out)
    except OSError as exc:
        print(f"output error: cannot write to {args.out}: {exc}", file=sys.stderr)
        return 1

    start = time.perf_counter()
    results, files = [], []
    for config in configs:
        try:
            result = RUNNERS[config.kind](config, threads=args.threads)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 1
        except NumericalGuardError as exc:
            print(f"numerical guard: [{config.name}] {exc}", file=sys.stderr)
            return 2
        results.append(result)
        files.extend(emit_csv(result, out))
        for m in result.members:
            shown = ", ".join(f"{k}={v:.4g}" for k, v in m.summary.items() if v is not None)
            print(f"[{config.name}] {m.label}: {shown}")
    manifest = write_manifest(results, files, out, time.perf_counter() - start)
    print(f"wrote {len(files)} files and {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
