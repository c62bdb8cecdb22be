"""SVG rendering of 2-D problems and solution trajectories.

Explicit problems render every vertex set as a polygon plus one polyline
through the trajectory points.  Pushing problems render the workspace,
obstacle and body footprints along the motion, and one polyline per movable
body through its knot positions.
"""

from __future__ import annotations

import numpy as np

from .environments.pushing import PushingGcs
from .gcs_core import ExplicitGcs
from .geometry import EmptySetError, polytope_vertices

_SET_FILL = "#9dc3e6"
_BODY_COLORS = ("#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e")


class VizError(ValueError):
    pass


def _angular_sort(points: np.ndarray) -> np.ndarray:
    center = points.mean(axis=0)
    angles = np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0])
    return points[np.argsort(angles)]


class _Canvas:
    def __init__(self):
        self.elements: list[str] = []
        self.lo = np.array([np.inf, np.inf])
        self.hi = np.array([-np.inf, -np.inf])

    def _grow(self, pts: np.ndarray):
        self.lo = np.minimum(self.lo, pts.min(axis=0))
        self.hi = np.maximum(self.hi, pts.max(axis=0))

    def polygon(self, pts: np.ndarray, fill: str, opacity: float = 0.45, stroke: str = "#555555"):
        self._grow(pts)
        coords = " ".join(f"{p[0]:.4f},{p[1]:.4f}" for p in pts)
        self.elements.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
            f'stroke="{stroke}" stroke-width="0.02"/>'
        )

    def polyline(self, pts: np.ndarray, color: str):
        self._grow(pts)
        coords = " ".join(f"{p[0]:.4f},{p[1]:.4f}" for p in pts)
        self.elements.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="0.06" stroke-linecap="round"/>'
        )

    def circle(self, center, radius: float, color: str):
        pt = np.asarray(center, dtype=float)
        self._grow(pt[None, :] + np.array([[-radius, -radius], [radius, radius]]))
        self.elements.append(
            f'<circle cx="{pt[0]:.4f}" cy="{pt[1]:.4f}" r="{radius:.4f}" fill="{color}"/>'
        )

    def to_svg(self, size: int = 640) -> str:
        if not np.all(np.isfinite(self.lo)):
            self.lo, self.hi = np.zeros(2), np.ones(2)
        margin = 0.05 * max(float(np.max(self.hi - self.lo)), 1e-6)
        lo = self.lo - margin
        hi = self.hi + margin
        w, h = hi - lo
        # flip y so +y points up
        body = "\n".join(self.elements)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
            f'height="{size * h / w:.0f}" viewBox="{lo[0]:.4f} {-hi[1]:.4f} {w:.4f} {h:.4f}">\n'
            f'<g transform="scale(1,-1)">\n{body}\n</g>\n</svg>\n'
        )


def render_explicit(problem: ExplicitGcs, points) -> str:
    """Polygons for every 2-D vertex set plus one trajectory polyline."""
    canvas = _Canvas()
    for vid in problem.all_vertex_ids():
        vert = problem.vertex(vid)
        if vert.dim != 2:
            raise VizError(f"vertex {vid!r} is {vert.dim}-D; only 2-D problems render")
        try:
            corners = polytope_vertices(vert.set)
        except EmptySetError:
            continue
        if corners.shape[0] >= 3:
            canvas.polygon(_angular_sort(corners), _SET_FILL)
        elif corners.shape[0] == 2:
            canvas.polyline(corners, "#888888")
        else:
            canvas.circle(corners[0], 0.06, "#555555")
    pts = np.array([np.asarray(p, dtype=float) for p in points])
    if pts.size == 0:
        raise VizError("empty trajectory")
    canvas.polyline(pts, "#c00000")
    for p in pts:
        canvas.circle(p, 0.05, "#c00000")
    return canvas.to_svg()


def _pushing_knots(problem: PushingGcs, path, points):
    """Per movable body, the sequence of world positions along the trajectory."""
    model = problem.model
    knots = {b: [] for b in model.movable}
    for vid, x in zip(path, points):
        x = np.asarray(x, dtype=float)
        if vid == "target":
            for b in model.movable:
                m = model.movable.index(b)
                knots[b].append(x[2 * m : 2 * m + 2])
        else:
            lay = model.layout(problem._mode_key(vid))
            for b in model.movable:
                for knot in (0, 1):
                    knots[b].append(x[lay.pos(b, knot)])
    return knots


def render_pushing(problem: PushingGcs, path, points) -> str:
    if not len(points):
        raise VizError("empty trajectory")
    canvas = _Canvas()
    ws = polytope_vertices(problem.model.workspace)
    canvas.polygon(_angular_sort(ws), "#ffffff", opacity=0.0)
    for body in problem.model.bodies:
        if not body.movable:
            canvas.polygon(body.polygon + np.asarray(body.position), "#666666", opacity=0.8)
    knots = _pushing_knots(problem, path, points)
    for i, b_idx in enumerate(problem.model.movable):
        color = _BODY_COLORS[i % len(_BODY_COLORS)]
        body = problem.model.bodies[b_idx]
        positions = knots[b_idx]
        for j, pos in enumerate(positions):
            last = j == len(positions) - 1
            canvas.polygon(body.polygon + pos, color, opacity=0.6 if last else 0.12)
        canvas.polyline(np.array(positions), color)
    return canvas.to_svg()


def render_solution(problem, path, points) -> str:
    if isinstance(problem, PushingGcs):
        return render_pushing(problem, path, points)
    if isinstance(problem, ExplicitGcs):
        return render_explicit(problem, points)
    raise VizError(f"cannot render problems of type {type(problem).__name__}")
