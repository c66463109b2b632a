"""Run every built-in preset and write CSVs under one output directory.

    python3 scripts/reproduce_figures.py --out results --threads 4
"""

import argparse
import sys

from coinwalk import cli
from coinwalk.experiments import PRESETS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--only", nargs="*", choices=sorted(PRESETS), help="subset of presets")
    args = parser.parse_args()
    for name in args.only or sorted(PRESETS):
        print(f"== {name}")
        code = cli.main(["--preset", name, "--out", f"{args.out}/{name}", "--threads", str(args.threads)])
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
