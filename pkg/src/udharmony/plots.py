"""Report figures rendered alongside the delimited output."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluate import ConfusionEntry


def render_confusion_figure(
    unconverted: list[ConfusionEntry],
    converted: list[ConfusionEntry],
    path: str | Path,
    threshold: int,
) -> None:
    """Two-panel bar chart of incorrect predictions by gold relation.

    Each bar is a system's total wrong count for a gold relation; the
    hatched portion is the share taken by the modal incorrect label.
    """
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5), sharey=True)
    for ax, entries, title in (
        (axes[0], unconverted, "Unconverted"),
        (axes[1], converted, "Converted"),
    ):
        labels = [e.gold_relation for e in entries]
        totals = [e.incorrect_predictions for e in entries]
        modal = [e.count for e in entries]
        x = range(len(entries))
        ax.bar(x, totals, color="#9ecae1", edgecolor="black", linewidth=0.5,
               label="incorrect predictions")
        ax.bar(x, modal, color="#3182bd", edgecolor="black", linewidth=0.5, hatch="//",
               label="modal incorrect label")
        ax.set_xticks(list(x))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
        ax.set_title(f"{title} (> {threshold} errors)")
        ax.set_ylabel("tokens")
    axes[0].legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
