"""SVG rendering of a 2-d mesh over the vector field of the dynamics."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..cert import CpaCandidate
from ..expr import SystemModel
from ..mesh import Triangulation

SIZE = 600
MARGIN = 20
QUIVER = 20


def mesh_edges(t: Triangulation) -> np.ndarray:
    """Unique undirected edges as sorted vertex pairs."""
    S = t.simplices
    pairs = np.concatenate([S[:, [p, q]] for p in range(t.n + 1) for q in range(p + 1, t.n + 1)])
    return np.unique(np.sort(pairs, axis=1), axis=0)


def _level_segments(t: Triangulation, values: np.ndarray, level: float) -> list[tuple[np.ndarray, np.ndarray]]:
    segments = []
    for s in t.simplices:
        v = values[s]
        p = t.vertices[s]
        hits = []
        for a, b in ((0, 1), (1, 2), (2, 0)):
            if (v[a] - level) * (v[b] - level) < 0:
                w = (level - v[a]) / (v[b] - v[a])
                hits.append(p[a] + w * (p[b] - p[a]))
        if len(hits) == 2:
            segments.append((hits[0], hits[1]))
    return segments


def emit_svg(
    t: Triangulation,
    model: SystemModel,
    candidate: CpaCandidate | None = None,
    path=None,
    levels: int = 6,
) -> str:
    """Mesh edges, domain box and a 20x20 arrow field of ``f``; V level sets when a candidate is given.

    Returns the SVG text and writes it to ``path`` when one is given.
    """
    if t.n != 2 or model.n != 2:
        raise ValueError("SVG output is only available for two-dimensional systems")
    lo, hi = model.lower, model.upper
    scale = (SIZE - 2 * MARGIN) / float(np.max(hi - lo))
    width, height = (hi - lo) * scale + 2 * MARGIN

    def xy(p):
        return MARGIN + (p[0] - lo[0]) * scale, height - MARGIN - (p[1] - lo[1]) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        f'<title>{model.name}: {t.n_vertices} vertices, {t.n_simplices} simplices</title>',
    ]
    x0, y0 = xy(lo)
    x1, y1 = xy(hi)
    out.append(f'<rect class="domain" x="{x0:.2f}" y="{y1:.2f}" width="{x1 - x0:.2f}" height="{y0 - y1:.2f}" '
               'fill="none" stroke="black" stroke-width="1.5"/>')

    # arrows scaled so the longest spans most of a quiver cell
    g = [np.linspace(lo[k], hi[k], QUIVER + 2)[1:-1] for k in range(2)]
    pts = np.stack(np.meshgrid(*g, indexing="ij"), axis=-1).reshape(-1, 2)
    f = model.f(pts)
    mag = np.linalg.norm(f, axis=1)
    cell = float(np.min(hi - lo)) / (QUIVER + 1)
    arrow = f * (0.8 * cell / mag.max()) if mag.max() > 0 else np.zeros_like(f)
    out.append('<g class="quiver" stroke="#7a9cc6" stroke-width="1">')
    for p, d in zip(pts, arrow):
        a, b = xy(p), xy(p + d)
        out.append(f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}"/>')
        out.append(f'<circle cx="{b[0]:.2f}" cy="{b[1]:.2f}" r="1.2" fill="#7a9cc6"/>')
    out.append("</g>")

    out.append('<g class="mesh" stroke="#333" stroke-width="0.6">')
    for a, b in mesh_edges(t):
        p, q = xy(t.vertices[a]), xy(t.vertices[b])
        out.append(f'<line x1="{p[0]:.2f}" y1="{p[1]:.2f}" x2="{q[0]:.2f}" y2="{q[1]:.2f}"/>')
    out.append("</g>")

    if candidate is not None:
        values = np.asarray(candidate.values, dtype=float)
        top = float(values.max())
        out.append('<g class="levels" stroke="#c0392b" stroke-width="1.2" fill="none">')
        for level in np.linspace(0.0, top, levels + 2)[1:-1]:
            for a, b in _level_segments(t, values, level):
                p, q = xy(a), xy(b)
                out.append(f'<line x1="{p[0]:.2f}" y1="{p[1]:.2f}" x2="{q[0]:.2f}" y2="{q[1]:.2f}"/>')
        out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
