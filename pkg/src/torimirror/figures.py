"""Matplotlib renderings that accompany CLI reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bundle import TWO_PI  # noqa: E402
from .lagrangian import LagrangianBrane, fiber_points  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 120,
}


def plot_class_map(report: dict, path) -> None:
    """Incidence of bundle classes (rows) against brane classes (columns)."""
    nb, nl = len(report["classes_bundle"]), len(report["classes_brane"])
    grid = np.zeros((max(nb, 1), max(nl, 1)))
    for bc, lc in report["map"]:
        grid[bc, lc] = 1.0
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 5.0 * max(nb, 1) / max(nl, 1) + 0.6))
        ax.imshow(grid, cmap="Greys", interpolation="nearest", aspect="auto")
        ax.set_xlabel(f"brane classes ({nl})")
        ax.set_ylabel(f"bundle classes ({nb})")
        ax.set_title(f"{report['mapping']} map: {report['verdict']}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_multisection(brane: LagrangianBrane, path, axis: int = 0, samples: int = 200) -> None:
    """Sheets of the multi-section over a sweep of one base coordinate.

    The other base coordinates are held at 0; the fiber coordinate along
    ``axis`` is drawn for each of the r' points.
    """
    xs = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.0))
        for x in xs:
            base = np.zeros(brane.n)
            base[axis] = x
            pts = fiber_points(brane, base)
            ax.plot(np.full(len(pts), x), pts[:, axis], ",", color="k")
        ax.set_xlim(0, TWO_PI)
        ax.set_ylim(0, TWO_PI)
        ax.set_xlabel(f"base coordinate {axis + 1}")
        ax.set_ylabel(f"fiber coordinate {axis + 1}")
        ax.set_title(f"r = {brane.r}, multiplicity {brane.rank.rprime}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
