"""Plot the CSV time series written by ``simulate`` (needs matplotlib).

    python3 scripts/plot_figures.py results/fig3 --out fig3.png
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_series(path: Path):
    with path.open() as fh:
        rows = list(csv.DictReader(fh))
    return [int(r["t"]) for r in rows], [float(r["value"]) for r in rows]


def main():
    parser = argparse.ArgumentParser(description="plot every series in a result directory")
    parser.add_argument("directory", type=Path)
    parser.add_argument("--out", type=Path, default=Path("figure.png"))
    args = parser.parse_args()

    by_obs = defaultdict(list)
    for path in sorted(args.directory.glob("*__*__*.csv")):
        _, member, obs = path.stem.split("__")
        by_obs[obs].append((member, path))
    if not by_obs:
        raise SystemExit(f"no series CSVs in {args.directory}")

    fig, axes = plt.subplots(1, len(by_obs), figsize=(6 * len(by_obs), 4.5), squeeze=False)
    for ax, (obs, members) in zip(axes[0], sorted(by_obs.items())):
        for member, path in members:
            t, v = read_series(path)
            ax.plot(t, v, lw=1, label=member)
        ax.set_xlabel("t")
        ax.set_ylabel(obs)
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
