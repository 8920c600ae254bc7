"""Render figures for a completed run directory.

Reads the delimited tables a run produced and writes PNG plots next to them
under <run_dir>/figures. Count grids become log-log count-versus-n plots with
the fitted line overlaid; complexity tables become semilog growth curves.
"""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def _plot_counts(path: Path, fits: dict, figdir: Path) -> list[Path]:
    header, rows = _read_rows(path)
    col = {name: i for i, name in enumerate(header)}
    if not {"n", "epsilon", "count", "grid"} <= set(col):
        return []
    grids = defaultdict(lambda: defaultdict(list))
    for row in rows:
        grids[row[col["grid"]]][float(row[col["epsilon"]])].append(
            (int(row[col["n"]]), int(row[col["count"]])))
    out = []
    for grid, by_eps in sorted(grids.items()):
        fig, ax = plt.subplots(figsize=(5.0, 3.8))
        for eps, pts in sorted(by_eps.items(), reverse=True):
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", markersize=3, linewidth=1,
                    label=f"eps={eps:g}")
        fit = fits.get(grid)
        if fit and fit.get("mode") == "polynomial":
            ns = sorted({p[0] for pts in by_eps.values() for p in pts})
            ys = [math.exp(fit["intercept"]) * n ** fit["slope"] for n in ns]
            ax.plot(ns, ys, linestyle="--", color="black", linewidth=1,
                    label=f"fit slope={fit['slope']:.2f}")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("separated count")
        ax.set_title(grid)
        ax.legend(fontsize=7)
        fig.tight_layout()
        target = figdir / f"{path.stem}_{grid}.png"
        fig.savefig(target, dpi=120)
        plt.close(fig)
        out.append(target)
    return out


def _plot_complexity(path: Path, figdir: Path) -> list[Path]:
    header, rows = _read_rows(path)
    col = {name: i for i, name in enumerate(header)}
    if not {"m", "count", "family", "k"} <= set(col):
        return []
    series = defaultdict(list)
    for row in rows:
        key = f"{row[col['family']]} k={row[col['k']]}"
        series[key].append((int(row[col["m"]]), int(row[col["count"]])))
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    for key, pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                marker="o", markersize=3, linewidth=1, label=key)
    ax.set_yscale("log")
    ax.set_xlabel("window width")
    ax.set_ylabel("word count")
    ax.set_title(path.stem)
    ax.legend(fontsize=7)
    fig.tight_layout()
    target = figdir / f"{path.stem}.png"
    fig.savefig(target, dpi=120)
    plt.close(fig)
    return [target]


def render_report(run_dir) -> list[Path]:
    """Render every recognized table in the run directory; returns the list
    of figure paths written (possibly empty)."""
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise FileNotFoundError(f"no run directory at {run_dir}")
    fits = {}
    fits_path = run_dir / "fits.json"
    if fits_path.exists():
        fits = json.loads(fits_path.read_text())
    figdir = run_dir / "figures"
    figdir.mkdir(exist_ok=True)
    written = []
    counts = run_dir / "counts.csv"
    if counts.exists():
        written += _plot_counts(counts, fits, figdir)
    for name in ("complexity.csv", "words.csv", "cylinders.csv"):
        table = run_dir / name
        if table.exists():
            written += _plot_complexity(table, figdir)
    return written
