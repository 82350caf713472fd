"""Figures for search reports. Rendered off-screen with the Agg backend."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "stackevo",
}


def figsize(width=5.0, ratio=None):
    ratio = ratio or (math.sqrt(5.0) - 1.0) / 2.0
    return (width, width * ratio)


def plot_progress(reports, path):
    """Best/median/mean CV balanced accuracy of the surviving population per generation."""
    gens = [r.generation_index for r in reports]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        ax.plot(gens, [r.best_score for r in reports], "o-", label="best")
        ax.plot(gens, [r.median_score for r in reports], "s--", label="median")
        ax.plot(gens, [r.mean_score for r in reports], "^:", label="mean")
        ax.set_xlabel("generation")
        ax.set_ylabel("CV balanced accuracy")
        ax.set_xticks(gens)
        ax.set_ylim(min(0.0, min(r.mean_score for r in reports)), 1.02)
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)
    return path


def plot_top(rows, path):
    """CV vs held-out balanced accuracy for each ranked pipeline.

    ``rows`` are dicts with ``rank``, ``cv_score`` and ``test_score`` keys.
    """
    ranks = [r["rank"] for r in rows]
    width = 0.38
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        ax.bar([k - width / 2 for k in ranks], [r["cv_score"] for r in rows], width, label="CV")
        ax.bar([k + width / 2 for k in ranks], [r["test_score"] for r in rows], width, label="test")
        ax.set_xlabel("rank")
        ax.set_ylabel("balanced accuracy")
        ax.set_xticks(ranks)
        ax.set_ylim(0.0, 1.05)
        ax.legend(loc="lower center", bbox_to_anchor=(0.5, 1.0), ncol=2)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)
    return path
