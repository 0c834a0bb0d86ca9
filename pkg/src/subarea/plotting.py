"""Static SVG scatter plots of a partition.

Rendering goes through matplotlib's SVG backend with the date stamp dropped
and a fixed hash salt, so identical input gives byte-identical files.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib
from matplotlib.figure import Figure

# matplotlib's tab20, spelled out so the cycle never depends on rcParams
PALETTE = (
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
    "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
    "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
)
OVERSIZED_COLOR = "#808080"
MARGIN = 0.05

STYLE = {
    "svg.hashsalt": "subarea",
    "svg.fonttype": "none",
    "font.family": "sans-serif",
    "font.size": 9,
    "axes.linewidth": 0.8,
    "xtick.direction": "in",
    "ytick.direction": "in",
}


def cluster_color(cluster_id: int) -> str:
    return PALETTE[(cluster_id - 1) % len(PALETTE)]


def _limits(values: Sequence[float]) -> tuple[float, float]:
    if not values:
        return 0.0, 1.0
    lo, hi = min(values), max(values)
    span = hi - lo
    if span == 0.0:
        pad = max(abs(lo) * MARGIN, 0.5)
        return lo - pad, hi + pad
    return lo - MARGIN * span, hi + MARGIN * span


def scatter_svg(
    groups: Sequence[tuple[int, Sequence[tuple[float, float]]]],
    centroids: Sequence[tuple[int, tuple[float, float]]] = (),
    oversized: Sequence[tuple[float, float]] = (),
    title: str = "",
    size: tuple[float, float] = (7.0, 6.0),
) -> str:
    """Render ``(cluster_id, [(lon, lat), ...])`` groups as an SVG string."""
    xs = [p[0] for _, pts in groups for p in pts] + [p[0] for p in oversized]
    ys = [p[1] for _, pts in groups for p in pts] + [p[1] for p in oversized]
    xs += [c[0] for _, c in centroids]
    ys += [c[1] for _, c in centroids]

    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=size)
        ax = fig.add_subplot(1, 1, 1)
        px = [p[0] for _, pts in groups for p in pts]
        py = [p[1] for _, pts in groups for p in pts]
        colors = [cluster_color(cid) for cid, pts in groups for _ in pts]
        if px:
            ax.scatter(px, py, s=10, c=colors, linewidths=0, zorder=2)
        if centroids:
            ax.scatter([c[0] for _, c in centroids], [c[1] for _, c in centroids],
                       marker="x", s=36, color="black", linewidths=1.0, zorder=3)
        if oversized:
            ax.scatter([p[0] for p in oversized], [p[1] for p in oversized], s=24,
                       facecolors="none", edgecolors=OVERSIZED_COLOR, linewidths=0.8, zorder=1)
        ax.set_xlim(*_limits(xs))
        ax.set_ylim(*_limits(ys))
        ax.set_xlabel("longitude")
        ax.set_ylabel("latitude")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": "subarea"})
    return buf.getvalue()
