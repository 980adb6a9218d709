"""Matplotlib figures for the report and CLI. PNG output is deterministic
because the Agg backend is forced and the Software metadata entry dropped."""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .drawing import CrossingReport, TwoLayerDrawing, verify_drawing  # noqa: E402

_META = {"Software": None}


def _save(fig, path: str) -> None:
    fig.savefig(path, metadata=_META, dpi=100)
    plt.close(fig)


def plot_drawing(d: TwoLayerDrawing, path: str, report: Optional[CrossingReport] = None) -> None:
    """X layer on top, Y layer below; edges of the violating triple in red."""
    report = report or verify_drawing(d)
    pos = d.positions()
    bad = set(report.violating_triple or ())
    width = max(len(d.x_order), len(d.y_order), 2)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * width), 3.0))
    for e in d.host.sorted_edges():
        color, lw = ("tab:red", 2.5) if e in bad else ("0.3", 1.2)
        ax.plot([pos[e[0]], pos[e[1]]], [1, 0], color=color, lw=lw, zorder=1)
    for order, y in ((d.x_order, 1), (d.y_order, 0)):
        ax.scatter(range(len(order)), [y] * len(order), s=60, c="white", edgecolors="black", zorder=2)
        for i, v in enumerate(order):
            ax.annotate(v, (i, y), xytext=(0, 9 if y else -14), textcoords="offset points", ha="center", fontsize=8)
    status = "fan-planar" if report.fan_planar else "not fan-planar"
    ax.set_title(f"{status}, max crossings per edge {report.max_crossings_per_edge}", fontsize=9)
    ax.set_ylim(-0.4, 1.4)
    ax.axis("off")
    _save(fig, path)


def plot_state_growth(series: dict[str, Sequence[Sequence[int]]], path: str) -> None:
    """Log-log plot of DP state counts against path length, one line per k."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for k, points in sorted(series.items()):
        ns, counts = zip(*points)
        ax.loglog(ns, counts, marker="o", label=f"k = {k}")
    ax.set_xlabel("path vertices n")
    ax.set_ylabel("window states")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def plot_crossings_vs_degree(histogram: Sequence[Sequence[int]], path: str) -> None:
    """Scatter of ``[max degree, max crossings, count]`` rows, marker area
    growing with count, against the diagonal bound."""
    fig, ax = plt.subplots(figsize=(4.5, 4))
    if histogram:
        ax.scatter([r[0] for r in histogram], [r[1] for r in histogram], s=[12 + 6 * r[2] ** 0.5 for r in histogram], alpha=0.6)
        top = max(max(r[0], r[1]) for r in histogram) + 1
        ax.plot([0, top], [0, top], ls="--", color="tab:red", lw=1, label="crossings = degree")
        ax.legend()
    ax.set_xlabel("max degree of host")
    ax.set_ylabel("max crossings per edge")
    fig.tight_layout()
    _save(fig, path)
