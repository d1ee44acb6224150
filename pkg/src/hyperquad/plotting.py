"""Figures for experiment results, written next to the CSV/JSON output."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bases import DomainKind  # noqa: E402


def _style(ax):
    ax.tick_params(direction="in", which="both")
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)


def plot_interval(result, path: str) -> str:
    """f with each L_n f (left) and pointwise |L_n f - f| on a log scale (right)."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4))
    for i, g in enumerate(result.grids):
        x = np.asarray(g.points)
        if i == 0:
            ax0.plot(x, g.f, "k-", lw=2.5, label="f")
        ax0.plot(x, g.approx, "--", lw=1, label=g.rule)
        ax1.semilogy(x, np.maximum(np.abs(g.error), 1e-18), lw=1, label=g.rule)
    ax0.set_xlabel("x")
    ax0.set_title(f"degree-{result.config.n} hyperinterpolants")
    ax1.set_xlabel("x")
    ax1.set_ylabel("|L_n f - f|")
    for ax in (ax0, ax1):
        _style(ax)
        ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sphere(result, path: str) -> str:
    """Colatitude-longitude maps of L_n f and of the pointwise error, one row per rule."""
    n_lat = result.config.grid_resolution
    n_lon = 2 * n_lat
    rows = max(len(result.grids), 1)
    fig, axes = plt.subplots(rows, 2, figsize=(10, 3 * rows), squeeze=False)
    extent = (0.0, 360.0, 180.0, 0.0)
    for (ax0, ax1), g in zip(axes, result.grids):
        approx = np.asarray(g.approx).reshape(n_lat, n_lon)
        err = np.abs(np.asarray(g.error)).reshape(n_lat, n_lon)
        im0 = ax0.imshow(approx, extent=extent, aspect="auto", cmap="viridis")
        im1 = ax1.imshow(np.log10(np.maximum(err, 1e-16)), extent=extent, aspect="auto", cmap="magma")
        ax0.set_title(f"{g.rule}: L_n f")
        ax1.set_title(f"{g.rule}: log10 |L_n f - f|")
        fig.colorbar(im0, ax=ax0)
        fig.colorbar(im1, ax=ax1)
        for ax in (ax0, ax1):
            ax.set_xlabel("longitude (deg)")
            ax.set_ylabel("colatitude (deg)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_result(result, out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    if result.config.domain.kind is DomainKind.INTERVAL:
        return plot_interval(result, os.path.join(out_dir, "interval_errors.png"))
    return plot_sphere(result, os.path.join(out_dir, "sphere_errors.png"))
