"""Figure rendering for the CLI report path (written to files, never shown)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_run(result, truth, path: str) -> None:
    """Two panels: released estimates vs the exact count, and the run's
    blocklist growth with the per-step TOO-HIGH tally."""
    ts = [r.t for r in result.records]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    ax1.plot(ts, [r.estimate for r in result.records], lw=0.8, label="estimate")
    if truth is not None:
        ax1.plot(ts, truth.F, lw=0.8, ls="--", label="exact")
    ax1.set_ylabel("distinct count")
    ax1.legend(loc="upper left", fontsize=8)
    ax2.plot(ts, result.blocklist_sizes, lw=0.8, label="blocklist size")
    ax2.plot(ts, [r.n_too_high for r in result.records], lw=0.6, alpha=0.7, label="levels TOO-HIGH")
    ax2.set_xlabel("t")
    ax2.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trials(suite: str, values, bound: float | None, path: str) -> None:
    """Per-trial metric scatter with the tested bound, one figure per suite."""
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(range(len(values)), values, ".", ms=4)
    if bound is not None:
        ax.axhline(bound, color="tab:red", lw=1, label="bound")
        ax.legend(fontsize=8)
    ax.set_xlabel("trial")
    ax.set_ylabel(suite)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
