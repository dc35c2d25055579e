"""Figure rendering for the report paths (saved to files, never shown)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_benchmark_figure(rows, path: str) -> None:
    """Exact distance vs. certified bounds over the chain length.

    Rows whose sweep produced no estimate still contribute their exact
    distance, so the figure degrades gracefully.
    """
    ns = [r.n for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(ns, [r.delta_exact for r in rows], "o", color="tab:green",
            label="exact distance", markersize=5)
    good = [r for r in rows if not r.error and not math.isnan(r.gamma)]
    if good:
        ax.plot([r.n for r in good], [r.gamma for r in good], "o",
                color="tab:blue", label="upper bound", markersize=4)
        ax.plot([r.n for r in good], [r.gamma_half for r in good], "o",
                color="tab:orange", label="lower bound", markersize=4)
    ax.set_xlabel("number of qubits")
    ax.set_ylabel("distance to identity")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_report_figure(report, path: str) -> None:
    """Per-cube angle profile of a check run, grouped by color class."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    pos = 0
    for summary in report.per_color:
        xs = list(range(pos, pos + len(summary.thetas)))
        ax.bar(xs, summary.thetas, width=0.8,
               label=f"color {summary.color} (phi={summary.phi:.3g})")
        pos += max(len(summary.thetas), 1) + 1
    ax.axhline(math.pi / 2, color="red", linestyle="--", linewidth=1,
               label="early-exit threshold")
    ax.set_xlabel("cube (grouped by color class)")
    ax.set_ylabel("commutator angle")
    ax.set_title(f"gamma = {report.gamma:.6g}"
                 + ("  [early exit]" if report.early_exit else ""))
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend(loc="best", frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
