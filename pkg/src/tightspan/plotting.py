"""File export of pictures: the hull's low skeleton and space diagnostics.

Only imported when a plot is requested, so matplotlib stays optional.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402

from .cells import HullComplex  # noqa: E402
from .io import _polygon_order  # noqa: E402
from .metric import sup_distance  # noqa: E402


def mds_layout(dist: np.ndarray) -> np.ndarray:
    """Classical multidimensional scaling to the plane.

    Eigenvector signs are fixed so the picture does not flip between runs.
    """
    n = len(dist)
    if n == 1:
        return np.zeros((1, 2))
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * J @ (dist ** 2) @ J
    w, V = np.linalg.eigh(B)
    top = np.argsort(w)[::-1][:2]
    xy = V[:, top] * np.sqrt(np.clip(w[top], 0, None))
    for k in range(xy.shape[1]):
        j = int(np.argmax(np.abs(xy[:, k])))
        if xy[j, k] < 0:
            xy[:, k] = -xy[:, k]
    if xy.shape[1] < 2:
        xy = np.hstack([xy, np.zeros((n, 2 - xy.shape[1]))])
    return xy


def plot_hull(cx: HullComplex, path, title: str | None = None):
    V = cx.vertices
    dist = np.array([[float(sup_distance(a, b)) for b in V] for a in V])
    xy = mds_layout(dist)
    embedded = {tuple(float(v) for v in row): x for x, row in enumerate(cx.metric.d)}

    fig, ax = plt.subplots(figsize=(5.5, 5))
    polys = []
    for i in cx.cells_of_dim(2):
        polys.append(xy[_polygon_order(cx, i)])
    if polys:
        ax.add_collection(PolyCollection(polys, facecolor="#c6dbef", edgecolor="none", alpha=0.6))
    for i in cx.cells_of_dim(1):
        a, b = cx.cells[i].vertex_ids
        ax.plot(xy[[a, b], 0], xy[[a, b], 1], color="0.25", lw=1)
    ax.scatter(xy[:, 0], xy[:, 1], s=14, color="0.1", zorder=3)
    for v, f in enumerate(V):
        x = embedded.get(tuple(float(t) for t in f))
        if x is not None:
            ax.annotate(cx.metric.label(x), xy[v], xytext=(3, 3), textcoords="offset points", fontsize=8)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title(title or f"hull: {len(V)} vertices, f-vector {cx.f_vector()}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_space(report: dict, labels, path):
    """Cone counts per apex, with the stability and hyperbolicity constants in the title."""
    counts = [row["cone_count"] for row in report["cones"]]
    fig, ax = plt.subplots(figsize=(max(4, 0.3 * len(counts) + 2), 3))
    ax.bar(range(len(counts)), counts, color="#4c72b0")
    ax.set_xticks(range(len(counts)))
    ax.set_xticklabels([str(s) for s in labels], rotation=90, fontsize=7)
    ax.set_ylabel("distinct cones")
    ax.set_title(f"min beta = {report['min_beta']}, delta = {report['delta']}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
