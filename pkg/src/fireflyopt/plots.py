"""Figure rendering for the report path: transfer-function curves, schedule
curves, and convergence traces are written as PNG files next to the
delimited output they illustrate."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .discretize import S_FAMILY


def plot_transfer_table(xs, columns: dict, path) -> None:
    """Two panels: S-shaped (and erf-based) curves left, V-shaped right."""
    fig, (ax_s, ax_v) = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for name, values in columns.items():
        ax = ax_s if name in S_FAMILY else ax_v
        ax.plot(xs, values, label=name, linewidth=1.4)
    ax_s.set_title("S-shaped transfer functions")
    ax_v.set_title("V-shaped transfer functions")
    for ax in (ax_s, ax_v):
        ax.set_xlabel("update value")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    ax_s.set_ylabel("probability")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_curve(series, path, *, ylabel: str, label: str = "") -> None:
    """One schedule series (itr, value) as a line plot."""
    fig, ax = plt.subplots(figsize=(7, 4))
    itrs = [p[0] for p in series]
    values = [p[1] for p in series]
    ax.plot(itrs, values, linewidth=1.6, label=label or None)
    ax.set_xlabel("iteration")
    ax.set_ylabel(ylabel)
    ax.grid(alpha=0.3)
    if label:
        ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_convergence(records, path) -> None:
    """Best-so-far traces of every replicate."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for rec in records:
        ax.plot(range(len(rec.best_trace)), rec.best_trace,
                linewidth=1.0, alpha=0.8, label=f"replicate {rec.replicate}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("best objective so far")
    ax.grid(alpha=0.3)
    if len(records) <= 10:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
