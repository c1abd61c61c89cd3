"""Static SVG figures of volumes, spectra and eigenfunctions."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import matplotlib.tri as mtri
import numpy as np

from .tiling import LABELS, DiV

# side a solid, side b dashed, side c dotted
SIDE_STYLE = {"a": "-", "b": "--", "c": ":"}

plt.rcParams["svg.hashsalt"] = "isodiv"
plt.rcParams["svg.fonttype"] = "none"


def save_fig(fig, path):
    fig.savefig(str(path), format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)


def draw_div(ax, div: DiV, numbers: bool = True, fill: str = "#e8eef6"):
    for p in div.placements:
        v = p.vertices
        ax.fill(v[:, 0], v[:, 1], color=fill, zorder=0)
        for lab in LABELS:
            seg = p.side_segment(lab)
            internal = div.neighbor(p.copy_index, lab) is not None
            ax.plot(seg[:, 0], seg[:, 1], linestyle=SIDE_STYLE[lab.value],
                    color="0.55" if internal else "k", lw=0.8 if internal else 1.6)
        if numbers:
            c = v.mean(axis=0)
            ax.text(c[0], c[1], str(p.copy_index + 1), ha="center", va="center", fontsize=9)
    ax.set_aspect("equal")
    ax.axis("off")


def plot_div(div: DiV, path, title: str | None = None):
    fig, ax = plt.subplots(figsize=(4, 4))
    draw_div(ax, div)
    if title:
        ax.set_title(title, fontsize=10)
    save_fig(fig, path)


def plot_pair(left: DiV, right: DiV, path, titles=("left", "right")):
    fig, axes = plt.subplots(1, 2, figsize=(8, 4))
    for ax, div, t in zip(axes, (left, right), titles):
        draw_div(ax, div)
        ax.set_title(t, fontsize=10)
    save_fig(fig, path)


def plot_spectra(spectra: dict, path, ylabel: str = "eigenvalue"):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    markers = "os^dv"
    for t, (name, vals) in enumerate(spectra.items()):
        idx = np.arange(1, len(vals) + 1)
        ax.plot(idx, vals, markers[t % len(markers)], mfc="none", label=name, ms=6 + 3 * t)
    ax.set_xlabel("index")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize=8)
    save_fig(fig, path)


def plot_eigenfunction(mesh, vec, path, title: str | None = None):
    """Filled contour plot of a nodal vector on a glued mesh."""
    tris = np.concatenate([mesh.node_ids[c][mesh.ref.elements] for c in range(mesh.div.n)])
    tri = mtri.Triangulation(mesh.coords[:, 0], mesh.coords[:, 1], tris)
    fig, ax = plt.subplots(figsize=(4.5, 4))
    lim = np.abs(vec).max() or 1.0
    cs = ax.tricontourf(tri, vec, levels=np.linspace(-lim, lim, 21), cmap="RdBu_r")
    ax.tricontour(tri, vec, levels=[0.0], colors="k", linewidths=0.6)
    fig.colorbar(cs, ax=ax, shrink=0.8)
    draw_div(ax, mesh.div, numbers=False, fill="none")
    if title:
        ax.set_title(title, fontsize=10)
    save_fig(fig, path)
