"""Matplotlib figure rendering for the CLI report paths.

Every figure is written to a file next to the delimited output; nothing
here opens an interactive window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .assessment import SweepResult
from .grids import SimilarityGrid
from .verbsim import MeasureReport


def save_grid_heatmap(grid: SimilarityGrid, path: str | Path,
                      sim_threshold: float | None = None,
                      title: str | None = None) -> Path:
    """Render a grid as an annotated heatmap; cells at or above the
    threshold get a highlight box."""
    fig, ax = plt.subplots(figsize=(1.2 * grid.n + 2.5, 0.8 * grid.m + 2.0))
    vmin = -1.0 if grid.kind == "semantic" else 0.0
    image = ax.imshow(grid.cells, cmap="viridis", vmin=vmin, vmax=1.0)
    ax.set_xticks(range(grid.n), labels=grid.col_ids, rotation=30, ha="right")
    ax.set_yticks(range(grid.m), labels=grid.row_ids)
    ax.set_xlabel("sending course outcomes")
    ax.set_ylabel("receiving course outcomes")
    for i in range(grid.m):
        for j in range(grid.n):
            value = grid.cells[i][j]
            ax.text(j, i, f"{value:.2f}", ha="center", va="center",
                    color="white" if value < 0.6 else "black", fontsize=8)
            if sim_threshold is not None and value >= sim_threshold:
                ax.add_patch(plt.Rectangle((j - 0.5, i - 0.5), 1, 1, fill=False,
                                           edgecolor="red", linewidth=2))
    ax.set_title(title or f"{grid.kind} similarity grid")
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def save_measure_bars(report: MeasureReport, path: str | Path) -> Path:
    """Bar chart of per-measure Pearson correlations; the winner is marked."""
    rows = [r for r in report.rows if r.r is not None]
    fig, ax = plt.subplots(figsize=(max(6.0, 1.1 * len(report.rows)), 4.0))
    names = [r.measure for r in rows]
    values = [r.r for r in rows]
    colors = ["tab:orange" if r.measure == report.best_measure else "tab:blue"
              for r in rows]
    bars = ax.bar(names, values, color=colors)
    for bar, row in zip(bars, rows):
        ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height(),
                f"{row.r:.3f}", ha="center", va="bottom", fontsize=8)
    ax.set_ylabel("Pearson correlation with gold scores")
    ax.set_title(f"Verb similarity measures ({report.total_pairs} pairs)")
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def save_sweep_plot(result: SweepResult, path: str | Path) -> Path:
    """Yes-decision counts (and agreement when present) across the sweep."""
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    yes_counts = [sum(1 for i in range(len(result.pair_ids))
                      if result.decisions[i][k] == "yes")
                  for k in range(len(result.values))]
    ax.plot(result.values, yes_counts, marker="o", label="pairs granted credit")
    ax.set_xlabel(result.param)
    ax.set_ylabel("pairs granted credit")
    ax.set_ylim(0, len(result.pair_ids))
    if result.agreements is not None:
        twin = ax.twinx()
        twin.plot(result.values, result.agreements, marker="s",
                  color="tab:orange", label="agreement %")
        twin.set_ylabel("agreement with annotations (%)")
        twin.set_ylim(0, 100)
    ax.set_title(f"Decision sweep over {result.param}")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
