"""SVG phase portraits of rank-2 alcoves (walls, quiver, trajectories, markers)."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .alcove import Alcove
from .kernels import FieldSystem

__all__ = ["Viewport", "phase_portrait", "basin_portrait", "fmt"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")


def fmt(v: float) -> str:
    return f"{float(v):.12g}"


class Viewport:
    """Affine map from frame coordinates onto an SVG canvas (y axis up)."""

    def __init__(self, alcove: Alcove, width: int = 480, height: int = 480, margin: float = 24.0):
        if alcove.rank != 2:
            raise ValueError("SVG output needs a rank-2 alcove")
        V = alcove.vertices_frame
        self.lo = V.min(axis=0)
        span = V.max(axis=0) - self.lo
        self.scale = min((width - 2 * margin) / span[0], (height - 2 * margin) / span[1])
        self.width, self.height, self.margin = width, height, margin

    def __call__(self, y) -> tuple[float, float]:
        u = self.margin + (y[0] - self.lo[0]) * self.scale
        v = self.height - self.margin - (y[1] - self.lo[1]) * self.scale
        return u, v


def _path(points: Iterable[tuple[float, float]]) -> str:
    pts = list(points)
    return "M " + " L ".join(f"{fmt(u)} {fmt(v)}" for u, v in pts)


def _walls(alcove: Alcove, vp: Viewport) -> list[str]:
    out = []
    for grp in alcove.facet_groups:
        i = grp[0]
        on = np.abs(alcove.vertices_frame @ alcove.G[i] + alcove.g[i]) <= 1e-9
        seg = alcove.vertices_frame[on]
        label = ", ".join(alcove.walls[j].describe() for j in grp)
        out.append(f'<path class="wall" d="{_path(vp(y) for y in seg)}" stroke="black" '
                   f'stroke-width="2" fill="none"><title>{_escape(label)}</title></path>')
    return out


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _quiver(alcove: Alcove, system: FieldSystem, vp: Viewport, n: int) -> list[str]:
    V = alcove.vertices_frame
    lo, hi = V.min(axis=0), V.max(axis=0)
    cell = float(np.min(hi - lo)) / n
    out = []
    for a in range(n):
        for b in range(n):
            y = lo + (np.array([a, b]) + 0.5) * (hi - lo) / n
            if system.min_slack(y) <= 0.2 * cell:
                continue
            X = system.field(y)
            nrm = float(np.linalg.norm(X))
            if nrm == 0.0:
                continue
            tip = y + 0.4 * cell * X / nrm
            (u1, v1), (u2, v2) = vp(y), vp(tip)
            out.append(f'<line class="quiver" x1="{fmt(u1)}" y1="{fmt(v1)}" x2="{fmt(u2)}" '
                       f'y2="{fmt(v2)}" stroke="#888888" stroke-width="1"/>')
    return out


def _document(vp: Viewport, body: list[str]) -> str:
    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{vp.width}" height="{vp.height}" viewBox="0 0 {vp.width} {vp.height}">\n')
    return head + "\n".join(body) + "\n</svg>\n"


def phase_portrait(alcove: Alcove, system: FieldSystem, trajectories: Sequence[np.ndarray] = (),
                   markers: Sequence[np.ndarray] = (), quiver_n: int = 14,
                   width: int = 480, height: int = 480) -> str:
    """Alcove outline, direction field, and trajectories (ambient point arrays)."""
    vp = Viewport(alcove, width, height)
    body = _walls(alcove, vp) + _quiver(alcove, system, vp, quiver_n)
    for k, traj in enumerate(trajectories):
        pts = [vp(alcove.to_frame(x)) for x in traj]
        colour = _PALETTE[k % len(_PALETTE)]
        body.append(f'<path class="trajectory" d="{_path(pts)}" stroke="{colour}" '
                    f'stroke-width="1.5" fill="none"/>')
    for x in markers:
        u, v = vp(alcove.to_frame(x))
        body.append(f'<circle class="marker" cx="{fmt(u)}" cy="{fmt(v)}" r="4" fill="black"/>')
    return _document(vp, body)


def basin_portrait(alcove: Alcove, seeds: Sequence[np.ndarray], labels: Sequence[str],
                   width: int = 480, height: int = 480) -> str:
    """Seeds coloured by the facet their flow ends on."""
    vp = Viewport(alcove, width, height)
    body = _walls(alcove, vp)
    keys = sorted(set(labels))
    for x, lab in zip(seeds, labels):
        u, v = vp(alcove.to_frame(x))
        colour = _PALETTE[keys.index(lab) % len(_PALETTE)]
        body.append(f'<circle class="seed" cx="{fmt(u)}" cy="{fmt(v)}" r="3" fill="{colour}">'
                    f'<title>{_escape(lab)}</title></circle>')
    return _document(vp, body)
