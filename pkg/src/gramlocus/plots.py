"""Figure rendering for surface point clouds.

Uses the Agg backend so rendering works headless; figures are written
straight to files next to the delimited output.
"""
from __future__ import annotations

from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiments import SurfacePoint  # noqa: E402


def render_surface(points: Iterable[SurfacePoint], coords: str,
                   path: str) -> None:
    """3-D scatter of the surface cloud; tangency points drawn larger."""
    pts = list(points)
    if coords == "det":
        rows = [p.d for p in pts]
        labels = ("d1", "d2", "d3")
    elif coords == "sigma":
        rows = [p.sigma for p in pts]
        labels = ("s1", "s2", "s3")
    else:
        raise ValueError(f"coords must be 'det' or 'sigma', got {coords!r}")
    mults = [p.multiplicity for p in pts]
    fig = plt.figure(figsize=(7.0, 6.0))
    ax = fig.add_subplot(projection="3d")
    if rows:
        xs, ys, zs = zip(*rows)
        sizes = [14.0 if m > 1 else 3.0 for m in mults]
        colors = ["#d62728" if m > 1 else "#1f77b4" for m in mults]
        ax.scatter(xs, ys, zs, s=sizes, c=colors, depthshade=True, linewidths=0)
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    ax.set_zlabel(labels[2])
    ax.set_title("Separating surface point cloud")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
