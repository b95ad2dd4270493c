"""SVG renderings of the Newton polygon and of the region map."""

from __future__ import annotations

import math
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .newton import NewtonPolygon  # noqa: E402
from .sieve import classify_region  # noqa: E402

# fixed ids and no timestamp so identical input gives identical files
plt.rcParams["svg.hashsalt"] = "cuboid-sites"
_META = {"Date": None, "Creator": None}


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata=_META, bbox_inches="tight")
    plt.close(fig)


def render_newton_polygon(np: NewtonPolygon, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 5))
    xs = [m for m, _ in np.nodes]
    ys = [r for _, r in np.nodes]
    ax.scatter(xs, ys, s=18, color="0.45", zorder=2, label="nodes")
    hx = [m for m, _ in np.upper_nodes]
    hy = [r for _, r in np.upper_nodes]
    ax.plot(hx, hy, color="crimson", lw=2, zorder=3, label="upper boundary")
    ax.scatter(hx, hy, s=30, color="crimson", zorder=4)
    for seg in np.upper_segments:
        (m0, r0), (m1, r1) = seg.start, seg.end
        ax.annotate(f"slope {seg.slope}", ((m0 + m1) / 2, (r0 + r1) / 2), textcoords="offset points",
                    xytext=(8, 8), fontsize=9, color="crimson")
    ax.set_xlabel("power of t")
    ax.set_ylabel("power of q")
    ax.set_xticks(range(0, max(xs) + 1, 2))
    ax.grid(alpha=0.3)
    ax.legend(loc="lower left")
    _save(fig, path)


_REGION_CODE = {"linear": 0, "nonlinear": 1, "no_cuboid": 2}
_COLORS = ListedColormap(["#87ceeb", "#f4c2c2", "#a9a9a9"])


def render_region_map(max_q: int, path: str, p_samples: int = 240, max_p: Optional[int] = None) -> None:
    """Classifier output on an integer ``(q, p)`` grid, log-scaled in ``p``,
    with the nine cubic strips and the bisector overlaid."""
    if max_q < 1:
        raise ValueError("max_q must be positive")
    max_p = max_p or 10 * max_q ** 3
    ps = sorted({max(1, round(math.exp(i * math.log(max_p) / (p_samples - 1)))) for i in range(p_samples)})
    qs = list(range(1, max_q + 1))
    grid = [[_REGION_CODE[classify_region(p, q).region] for q in qs] for p in ps]
    fig, ax = plt.subplots(figsize=(7, 5))
    q_edges = [q - 0.5 for q in qs] + [qs[-1] + 0.5]
    p_edges = [ps[0] * 0.9] + [math.sqrt(a * b) for a, b in zip(ps, ps[1:])] + [ps[-1] * 1.1]
    ax.pcolormesh(q_edges, p_edges, grid, cmap=_COLORS, vmin=0, vmax=2, shading="flat")
    fine = [0.5 + i * (max_q) / 400 for i in range(401)]
    for B in range(1, 10):
        ax.plot(fine, [B * q ** 3 for q in fine], color="purple", lw=0.8)
    ax.plot(fine, fine, color="navy", lw=1.2, ls="--")
    ax.set_yscale("log")
    ax.set_xlim(0.5, max_q + 0.5)
    ax.set_ylim(p_edges[0], p_edges[-1])
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in _COLORS.colors]
    handles += [plt.Line2D([], [], color="purple"), plt.Line2D([], [], color="navy", ls="--")]
    ax.legend(handles, ["linear", "nonlinear", "no cuboid", "p = B q^3 strips", "bisector strip"],
              loc="upper left", fontsize=8)
    _save(fig, path)
