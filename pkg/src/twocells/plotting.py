"""PNG figures for the command line's ``--figures`` option."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .rewriting import format_step  # noqa: E402
from .terms import format_term  # noqa: E402

_KIND_COLOURS = {"functoriality": "tab:blue", "naturality": "tab:green",
                 "axiom": "tab:red", "identity": "tab:gray"}


def _layered(vertices, depth):
    """Positions with depth on the x axis and vertices spread along y."""
    by_depth: dict = {}
    for v in vertices:
        by_depth.setdefault(depth[v], []).append(v)
    pos = {}
    for d, vs in by_depth.items():
        for k, v in enumerate(vs):
            pos[v] = (d, k - (len(vs) - 1) / 2)
    return pos


def _draw(ax, vertices, edges, depth, sig, colours=None, max_labels=40):
    pos = _layered(vertices, depth)
    colours = colours or {}
    for e in edges:
        (x0, y0), (x1, y1) = pos[e.source], pos[e.target]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color=colours.get(e, "0.4"), lw=1.2,
                                    shrinkA=8, shrinkB=8))
        if len(edges) <= max_labels:
            ax.text((x0 + x1) / 2, (y0 + y1) / 2, format_step(e), fontsize=6, color="0.3")
    for v, (x, y) in pos.items():
        ax.plot(x, y, "o", color="black", ms=4)
        if len(vertices) <= max_labels:
            ax.text(x, y + 0.12, format_term(v, sig), fontsize=7, ha="center")
    ax.set_axis_off()


def graph_figure(g, s, path: Path, title: str = "reduction graph") -> Path:
    fig, ax = plt.subplots(figsize=(8, 5))
    _draw(ax, g.vertices, g.edges, g.depth, s.sig)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def verdict_figure(v, s, path: Path) -> Path:
    """The two paths and the witness faces, edges coloured by face kind."""
    colours: dict = {}
    for f in v.faces:
        for e in f.left + f.right:
            colours.setdefault(e, _KIND_COLOURS.get(f.justification.kind, "black"))
    edges = list(dict.fromkeys(list(v.alpha) + list(v.beta) + list(colours)))
    depth: dict = {}
    if v.alpha:
        depth[v.alpha[0].source] = 0
    changed = True
    while changed:
        changed = False
        for e in edges:
            if e.source in depth and depth.get(e.target, -1) < depth[e.source] + 1:
                depth[e.target] = depth[e.source] + 1
                changed = True
    verts = list(depth)
    fig, ax = plt.subplots(figsize=(8, 5))
    _draw(ax, verts, edges, depth, s.sig, colours)
    ax.set_title(v.summary)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def counts_figure(xs, ys, path: Path, xlabel: str, ylabel: str, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, "o-")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def bars_figure(labels, values, path: Path, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(values)), values, color="tab:blue")
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
