"""Matplotlib renderings written alongside the CSV exports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_lambda_heatmap(lam, path, title="Estimated block rates"):
    lam = np.asarray(lam)
    k = lam.shape[0]
    fig, ax = plt.subplots(figsize=(max(3.0, 0.6 * k + 2), max(2.5, 0.6 * k + 1.5)))
    im = ax.imshow(lam, cmap="viridis", origin="upper")
    ax.set_xticks(range(k), [str(c + 1) for c in range(k)])
    ax.set_yticks(range(k), [str(c + 1) for c in range(k)])
    ax.set_xlabel("column cluster")
    ax.set_ylabel("row cluster")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="rate")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_membership_timeline(z, path, title="Cluster membership over time"):
    z = np.asarray(z)
    t_steps, n = z.shape
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * t_steps), max(3.0, 0.18 * n + 1.5)))
    im = ax.imshow(z.T + 1, aspect="auto", cmap="tab20", interpolation="nearest")
    ax.set_xticks(range(t_steps), [str(t + 1) for t in range(t_steps)])
    ax.set_xlabel("time step")
    ax.set_ylabel("object")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="cluster", ticks=np.unique(z) + 1)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report_summary(aggregates, path):
    """Grouped bars of mean RI and mean normalized log-likelihood per setting."""
    cells = sorted({(a["movement_ratio"], a["zero_ratio"]) for a in aggregates})
    models = sorted({a["model"] for a in aggregates})
    by_key = {(a["movement_ratio"], a["zero_ratio"], a["model"]): a for a in aggregates}
    xs = np.arange(len(cells))
    width = 0.8 / max(len(models), 1)
    fig, axes = plt.subplots(2, 1, figsize=(max(6.0, 1.1 * len(cells)), 7), sharex=True)
    for ax, metric, label in zip(axes, ("ri_mean", "ll_mean"), ("mean RI", "mean normalized log-likelihood")):
        for mi, model in enumerate(models):
            vals = [by_key.get(cell + (model,), {}).get(metric, np.nan) for cell in cells]
            ax.bar(xs + (mi - (len(models) - 1) / 2) * width, vals, width, label=model)
        ax.set_ylabel(label)
        ax.grid(axis="y", alpha=0.3)
    axes[0].legend()
    axes[1].set_xticks(xs, [f"m={m}\ns={s}" for m, s in cells])
    axes[1].set_xlabel("setting")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
