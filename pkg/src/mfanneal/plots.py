"""Figure rendering for benchmark reports.

Every function takes prepared data and a target path, draws one figure and
writes it to disk; nothing is shown interactively. The CLI drops these next
to its CSV/JSON output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIG_WIDTH = 6.4
GOLDEN = 1.618


def _new_axes():
    fig, ax = plt.subplots(figsize=(FIG_WIDTH, FIG_WIDTH / GOLDEN))
    return fig, ax


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_ecdf_figure(batches, path, title="Empirical CDF of trial values"):
    """Step-style ECDF curves, one per amplitude."""
    fig, ax = _new_axes()
    for batch in batches:
        ecdf = np.asarray(batch.ecdf)
        if ecdf.size == 0:
            continue
        ax.step(ecdf[:, 0], ecdf[:, 1], where="post",
                label=f"A = {batch.amplitude:g}")
    ax.set_xlabel("trial value")
    ax.set_ylabel("cumulative fraction")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def save_sweep_stats_figure(batches, path, title="Trial statistics vs amplitude"):
    """Mean, best and standard deviation across the amplitude sweep."""
    amps = [b.amplitude for b in batches]
    means = [b.mean for b in batches]
    bests = [b.best for b in batches]
    stds = [b.std for b in batches]
    fig, ax = _new_axes()
    ax.plot(amps, means, "o-", label="mean")
    ax.plot(amps, bests, "s-", label="best")
    ax.set_xlabel("field amplitude")
    ax.set_ylabel("trial value")
    ax2 = ax.twinx()
    ax2.plot(amps, stds, "^--", color="tab:red", label="std")
    ax2.set_ylabel("standard deviation")
    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, loc="best", fontsize=8)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def save_mixing_terms_figure(table, path,
                             title="Entropy term vs transverse term"):
    """The two mixing terms over magnetization, from mixing_term_table data."""
    table = np.asarray(table)
    fig, ax = _new_axes()
    ax.plot(table[:, 0], table[:, 1], label="entropy term")
    ax.plot(table[:, 0], table[:, 2], "--", label="transverse term")
    ax.set_xlabel("magnetization")
    ax.set_ylabel("mixing term value")
    ax.set_ylim(np.percentile(table[:, 1], 2), np.percentile(table[:, 1], 98))
    ax.legend(loc="best", fontsize=8)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)
