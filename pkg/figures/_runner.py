"""Shared driver for the figure scripts: run CLI invocations, optionally plot."""

from __future__ import annotations

import argparse
import csv
import shlex
from pathlib import Path
from typing import Sequence

from cmkinetic.cli import main as cli_main


def parse_args(description: str) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--out-dir", default="figures/data", help="where the CSV files go")
    parser.add_argument("--plot", action="store_true", help="also draw PNGs (needs matplotlib)")
    parser.add_argument("--dry-run", action="store_true", help="print the invocations only")
    return parser.parse_args()


def run_all(jobs: Sequence[tuple[str, list[str]]], out_dir: str, dry_run: bool) -> dict[str, Path]:
    """Run ``cmkinetic <argv> --out <out_dir>/<name>.csv`` for every job."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, argv in jobs:
        path = out / f"{name}.csv"
        full = [*argv, "--out", str(path)]
        print("cmkinetic " + shlex.join(full))
        if not dry_run:
            code = cli_main(full)
            if code not in (0, 3):
                raise SystemExit(f"{name}: cmkinetic exited with {code}")
        paths[name] = path
    return paths


def read_columns(path: Path, x: str, y: str) -> tuple[list[float], list[float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [float(r[x]) for r in rows], [float(r[y]) for r in rows]


def plot_curves(paths: dict[str, Path], groups: dict[str, list[str]], x: str, y: str, out_dir: str, logx: bool = False) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for title, names in groups.items():
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for name in names:
            xs, ys = read_columns(paths[name], x, y)
            ax.plot(xs, ys, label=name)
        if logx:
            ax.set_xscale("log")
        ax.set_xlabel(x)
        ax.set_ylabel(y)
        ax.set_title(title)
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(Path(out_dir) / f"{title}.png", dpi=120)
        plt.close(fig)
