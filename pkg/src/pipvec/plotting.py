"""Figures for scaling reports: measured times as markers, fits as lines."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import TimingSample, group_samples, predict  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def plot_scaling(samples, fits, path, errors=None, dpi=150):
    """Two panels (linear and log-log) of runtime against batch size.

    ``errors`` rows, if given, are drawn as hollow markers so a fit from
    small batches can be compared with measurements at larger ones.
    """
    path = Path(path)
    groups = group_samples(samples)
    held_out = group_samples(
        TimingSample(r.n_points, r.algorithm, r.actual_s) for r in (errors or ())
    )
    algorithms = sorted(set(groups) | set(held_out) | set(fits))
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.4), constrained_layout=True)
        for k, alg in enumerate(algorithms):
            color = f"C{k % 10}"
            ns = [s.n_points for s in groups.get(alg, []) + held_out.get(alg, [])]
            for ax in axes:
                if alg in groups:
                    g = groups[alg]
                    ax.plot([s.n_points for s in g], [s.elapsed_seconds for s in g], "o",
                            color=color, ms=4, label=f"{alg} measured")
                if alg in held_out:
                    g = held_out[alg]
                    ax.plot([s.n_points for s in g], [s.elapsed_seconds for s in g], "o",
                            mfc="none", color=color, ms=5, label=f"{alg} held out")
                if alg in fits and ns:
                    grid = np.geomspace(min(ns), max(ns), 200)
                    pred = predict(fits[alg], grid)
                    ax.plot(grid, pred, "-", color=color, lw=1, label=f"{alg} fit")
        axes[0].set_xlabel("points")
        axes[0].set_ylabel("time / s")
        axes[1].set_xscale("log")
        axes[1].set_yscale("log")
        axes[1].set_xlabel("points")
        axes[0].legend(frameon=False)
        fig.savefig(path, dpi=dpi)
        plt.close(fig)
    return path

