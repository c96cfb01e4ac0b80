"""Figures for induction reports.

Renders the description-length descent of a trace to an image file next to
the tab-separated records; uses the Agg backend so it works headless.
"""

from __future__ import annotations

from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .induce import TraceRecord


def plot_trace(records: Iterable[TraceRecord], path: str, title: str = "description length") -> None:
    records = list(records)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if records:
        xs = [0] + [r.iteration for r in records]
        ys = [records[0].dl_before] + [r.dl_after for r in records]
        ax.plot(xs, ys, marker=".", linewidth=1)
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("total DL (symbols)")
    ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
