"""Figure rendering for the CLI report paths.

Each analysis that writes a delimited output can render a companion figure
next to it.  Figures are written to files only (Agg backend); nothing here
opens a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .enumeration import RuntimeHistogram
from .stats import RegressionFit

DPI = 150


def save_figure(fig, path: str | Path) -> None:
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


def figure_path(out_csv: str | Path) -> Path:
    """Companion figure path for a delimited output file."""
    return Path(out_csv).with_suffix(".png")


def runtime_histogram_figure(hist: RuntimeHistogram):
    """Halting-time distribution with the cumulative halting fraction."""
    steps = np.array(sorted(hist.bins))
    counts = np.array([hist.bins[s] for s in steps], dtype=float)
    cumulative = np.cumsum(counts) / counts.sum()

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(steps, counts, width=1.0, color="steelblue", label="halting machines")
    ax.set_yscale("log")
    ax.set_xlabel("steps to halt")
    ax.set_ylabel("machines")
    ax2 = ax.twinx()
    ax2.plot(steps, cumulative, color="darkred", lw=1.2, label="cumulative fraction")
    ax2.set_ylabel("cumulative fraction of halters")
    ax2.set_ylim(0, 1.02)
    ax.set_title(f"halting times ({hist.halted} halters of {hist.probed} probed)")
    fig.tight_layout()
    return fig


def scatter_matrix_figure(names: Sequence[str], columns: np.ndarray):
    """Pairwise scatter plots (lower triangle) with names on the diagonal."""
    k = len(names)
    fig, axes = plt.subplots(k, k, figsize=(2.1 * k, 2.1 * k))
    if k == 1:
        axes = np.array([[axes]])
    for i in range(k):
        for j in range(k):
            ax = axes[i, j]
            ax.set_xticks([])
            ax.set_yticks([])
            if i == j:
                ax.text(0.5, 0.5, names[i], ha="center", va="center", fontsize=11)
            elif i > j:
                ax.scatter(columns[:, j], columns[:, i], s=4, alpha=0.35, lw=0)
            else:
                r = np.corrcoef(columns[:, j], columns[:, i])[0, 1]
                ax.text(0.5, 0.5, f"r = {r:.2f}", ha="center", va="center")
    fig.tight_layout()
    return fig


def complexity_violin_figure(sample: Sequence[float], population: Sequence[float]):
    """Distribution of response complexities next to the population of all
    tabled patterns of the same length."""
    fig, ax = plt.subplots(figsize=(5, 4))
    parts = ax.violinplot(
        [list(population), list(sample)], showmeans=True, showextrema=True
    )
    for body in parts["bodies"]:
        body.set_alpha(0.6)
    ax.set_xticks([1, 2])
    ax.set_xticklabels(["all patterns", "responses"])
    ax.set_ylabel("complexity (bits)")
    fig.tight_layout()
    return fig


def logistic_figure(
    x: Sequence[float],
    y: Sequence[int],
    fit: RegressionFit,
    curve: Mapping[str, Sequence[float]] | None = None,
):
    """Observed choices, the fitted probability curve, and the 0.5 threshold."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    jitter = (np.arange(x.size) % 7 - 3) * 0.004
    ax.plot(x, y + jitter, "k.", ms=4, alpha=0.45)
    if curve is not None:
        grid = np.asarray(curve["x"])
        prob = np.asarray(curve["y"])
        ax.plot(grid, prob, color="darkred", lw=1.6)
        if "lower" in curve and "upper" in curve:
            ax.fill_between(
                grid, curve["lower"], curve["upper"], color="darkred", alpha=0.18, lw=0
            )
    ax.axhline(0.5, ls=":", color="gray", lw=1)
    ax.axvline(fit.threshold, ls=":", color="gray", lw=1)
    ax.set_xlabel("complexity (bits)")
    ax.set_ylabel("P(judged random)")
    ax.set_ylim(-0.08, 1.08)
    fig.tight_layout()
    return fig


def span_r2_figure(r2_by_span: Mapping[int, float]):
    """Variance in ratings explained by mean local complexity, per span."""
    spans = sorted(r2_by_span)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(spans, [r2_by_span[s] for s in spans], "o-", color="steelblue")
    ax.set_xlabel("span")
    ax.set_ylabel(r"$R^2$")
    ax.set_xticks(spans)
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    return fig
