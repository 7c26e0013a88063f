"""
Deterministic SVG drawings of pre-carpets and graph overlays.

Coordinates are written with fixed precision and the y axis is flipped so
the figure appears in the usual mathematical orientation.
"""

from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from carpetres.geometry.carpet import CarpetParams
from carpetres.geometry.cells import BoundaryClass, boundary_segments, cell_polygons

CANVAS = 400.0
MARGIN = 10.0

CELL_STYLE = 'fill="#f2f2f2" stroke="#333333" stroke-width="0.5"'
A_STYLE = 'stroke="#1f5fbf" stroke-width="3" stroke-linecap="round"'
B_STYLE = 'stroke="#c0392b" stroke-width="3" stroke-linecap="round"'


def _to_canvas(points: np.ndarray) -> np.ndarray:
    scale = (CANVAS - 2 * MARGIN) / 2.0
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.column_stack([MARGIN + scale * (pts[:, 0] + 1.0),
                            MARGIN + scale * (1.0 - pts[:, 1])])


def _fmt(value: float) -> str:
    # Avoid "-0.000000" so output is stable under sign-of-zero noise.
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def polygon_path_d(vertices: np.ndarray) -> str:
    """SVG path d for a closed polygon given in carpet coordinates."""
    pts = _to_canvas(vertices)
    return "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts) + " Z"


def _line(p: np.ndarray, q: np.ndarray, style: str) -> str:
    (x1, y1), (x2, y2) = _to_canvas(np.stack([p, q]))
    return f'  <line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" {style}/>'


def _document(body: Iterable[str], title: str) -> str:
    size = f"{CANVAS:g}"
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"  <title>{title}</title>",
    ]
    return "\n".join([*head, *body, "</svg>"]) + "\n"


def _cell_paths(params: CarpetParams, n: int) -> list[str]:
    return [f'  <path d="{polygon_path_d(poly)}" {CELL_STYLE}/>'
            for poly in cell_polygons(params, n)]


def _ab_lines(params: CarpetParams, n: int) -> list[str]:
    lines = []
    for seg in boundary_segments(params, n):
        style = A_STYLE if seg.boundary_class is BoundaryClass.A else B_STYLE
        lines.append(_line(seg.start, seg.end, style))
    return lines


def emit_carpet_svg(params: CarpetParams, n: int, highlight_ab: bool = False,
                    path: Optional[Path] = None) -> str:
    """
    Draw the cells of F_n, optionally with A_n (blue) and B_n (red) drawn thick.

    Returns the document text; also writes it when ``path`` is given.
    """
    body = _cell_paths(params, n)
    if highlight_ab:
        body += _ab_lines(params, n)
    text = _document(body, f"4N-carpet N={params.N} level {n}")
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text


def emit_overlay_svg(params: CarpetParams, level: int, positions: np.ndarray,
                     edges: np.ndarray, marked: dict[str, np.ndarray],
                     title: str) -> str:
    """Draw a graph (positions, edges) over the cells of F_level."""
    body = _cell_paths(params, level)
    for i, j in edges:
        body.append(_line(positions[i], positions[j], 'stroke="#555555" stroke-width="0.8"'))
    colors = {"A": "#1f5fbf", "B": "#c0392b", "other": "#222222"}
    radius = max(0.6, 3.0 * params.r ** level)
    canvas = _to_canvas(positions)
    for name, ids in marked.items():
        color = colors.get(name, "#222222")
        for i in ids:
            x, y = canvas[i]
            body.append(f'  <circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius)}" fill="{color}"/>')
    return _document(body, title)
