"""Render convergence studies as log-log figures next to the CSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def convergence_figure(rows, path, title: str = "") -> None:
    """Save a log-log plot of H1 error vs mesh size with a slope-1 guide."""
    hs = [row.h for row in rows]
    errs = [row.h1_error for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(hs, errs, "o-", label="H1 seminorm error")
    ref = [errs[0] * (h / hs[0]) for h in hs]
    ax.loglog(hs, ref, "--", color="gray", label="O(h)")
    ax.set_xlabel("h")
    ax.set_ylabel("error")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
