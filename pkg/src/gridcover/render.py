"""Static figures: grid, tessellation cells, stops, and paths.

Rendering is display-only; nothing here feeds back into any computation.
Cell boundaries are drawn from a sampled nearest-center assignment, not
from constructed polygons.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402
from scipy.spatial import cKDTree  # noqa: E402

from gridcover.grid import Grid  # noqa: E402
from gridcover.pathgen import CoveringPath  # noqa: E402
from gridcover.stops import StopSet  # noqa: E402


def render_figure(g: Grid, stop_set: StopSet | None = None,
                  path: CoveringPath | None = None, show_cells: bool = False,
                  out: str | Path = "figure.svg", title: str | None = None) -> Path:
    """Draw the grid with optional stop/cell/path layers and save the figure.

    The output format follows the file extension (SVG by default).
    """
    fig, ax = plt.subplots(figsize=(7, 7))
    xmin, ymin, xmax, ymax = g.bbox

    for i, j in sorted(g.squares):
        ax.add_patch(Rectangle((i, j), 1, 1, facecolor="0.88", edgecolor="0.75", lw=0.4))
    for loop in g.boundary_loops():
        verts = list(loop.vertices) + [loop.vertices[0]]
        xs, ys = zip(*verts)
        ax.plot(xs, ys, color="black", lw=1.6,
                linestyle="--" if loop.is_hole else "-")

    pad = 1.0
    if stop_set is not None:
        lat = stop_set.lattice
        pad = max(1.0, float(2 * lat.k))
        if show_cells:
            centers = np.array([c.as_floats() for c in lat.centers()])
            tree = cKDTree(centers)
            res = max(0.02, float(min(lat.d, lat.s)) / 16)
            gx = np.arange(xmin - pad, xmax + pad, res)
            gy = np.arange(ymin - pad, ymax + pad, res)
            mx, my = np.meshgrid(gx, gy)
            pts = np.column_stack([mx.ravel(), my.ravel()])
            _, idx = tree.query(pts, p=1)
            lab = idx.reshape(mx.shape)
            edge = np.zeros_like(lab, dtype=bool)
            edge[:, 1:] |= lab[:, 1:] != lab[:, :-1]
            edge[1:, :] |= lab[1:, :] != lab[:-1, :]
            ax.scatter(mx[edge], my[edge], s=0.3, c="tab:cyan", alpha=0.5,
                       linewidths=0, rasterized=True)
        if stop_set.c_in:
            pts = np.array([c.as_floats() for c in stop_set.c_in])
            ax.scatter(pts[:, 0], pts[:, 1], s=28, c="tab:blue", zorder=5,
                       label="inside stops")
        if stop_set.projected:
            pts = np.array([ps.stop.as_floats() for ps in stop_set.projected])
            ax.scatter(pts[:, 0], pts[:, 1], s=34, c="tab:red", marker="^",
                       zorder=5, label="boundary stops")

    if path is not None and path.stops:
        pts = np.array([q.as_floats() for q in path.stops])
        ax.plot(pts[:, 0], pts[:, 1], color="tab:green", lw=1.1, zorder=4,
                label=f"path (L={float(path.L):.1f}, T={path.T})")
        ax.scatter(pts[:1, 0], pts[:1, 1], s=60, c="tab:green", marker="s", zorder=6)

    ax.set_xlim(xmin - pad, xmax + pad)
    ax.set_ylim(ymin - pad, ymax + pad)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    handles, labels = ax.get_legend_handles_labels()
    if handles:
        ax.legend(loc="upper right", fontsize=8)
    out = Path(out)
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)
    return out


def benchmark_figure(rows, out: str | Path) -> Path:
    """Scatter of approximation ratios against instance area."""
    areas, r_lower, o_areas, r_oracle = [], [], [], []
    for row in rows:
        v = row.values
        if isinstance(v.get("ratio_lower"), float):
            areas.append(v["A"])
            r_lower.append(v["ratio_lower"])
        if isinstance(v.get("ratio_oracle"), float):
            o_areas.append(v["A"])
            r_oracle.append(v["ratio_oracle"])
    fig, ax = plt.subplots(figsize=(6, 4))
    if areas:
        ax.scatter(areas, r_lower, s=22, c="tab:blue", label="cost / lower bound")
    if o_areas:
        ax.scatter(o_areas, r_oracle, s=26, c="tab:red", marker="^",
                   label="cost / oracle optimum")
    ax.axhline(1.0, color="0.6", lw=0.8)
    ax.set_xlabel("area")
    ax.set_ylabel("ratio")
    ax.set_title("Realized approximation ratios")
    ax.legend(fontsize=8)
    out = Path(out)
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)
    return out
