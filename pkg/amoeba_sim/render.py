# encoding: utf-8

"""
Text and SVG pictures of a system configuration.

Both renderers draw direction 0 straight up with directions increasing
clockwise, which makes the hexagons flat-topped. Cell (x, y) is placed in
column x and half-row -(2y + x).
"""

import math
import zlib
from typing import Dict, Iterable, List, Tuple
from xml.sax.saxutils import escape, quoteattr

from amoeba_sim.geometry import OFFSETS, Cell, Shape
from amoeba_sim.particles import SystemConfig

ARROWS = "↑↗↘↓↙↖"
TAIL = "o"
FREE = "."
ORIGIN = "+"
MARGIN = 2

HEX_RADIUS = 20.0
SQRT3 = math.sqrt(3.0)

PALETTE = (
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759",
    "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
)


def half_row(cell: Cell) -> int:
    return -(2 * cell[1] + cell[0])


def _cell_symbols(system: SystemConfig) -> Dict[Cell, str]:
    symbols = {}
    for p in system:
        symbols[p.head] = ARROWS[p.orientation]
        if p.shape is Shape.S2:
            symbols[p.tail] = TAIL
    return symbols


def _bounds(cells: Iterable[Cell]) -> Tuple[int, int, int, int]:
    cells = list(cells) or [Cell(0, 0)]
    xs = [c[0] for c in cells]
    rows = [half_row(c) for c in cells]
    return (min(xs) - MARGIN, max(xs) + MARGIN,
            min(rows) - 2 * MARGIN, max(rows) + 2 * MARGIN)


def render_ascii(system: SystemConfig) -> str:
    """
    One character per cell: an arrow on each head pointing along the
    particle's orientation, `o` on the tail of an expanded particle, `.`
    on free cells and `+` on the origin when it is free. The viewport fits
    the occupied cells plus a margin of two cells.
    """
    symbols = _cell_symbols(system)
    x_min, x_max, row_min, row_max = _bounds(symbols)

    lines = []
    for row in range(row_min, row_max + 1):
        chars = []
        for x in range(x_min, x_max + 1):
            if (row + x) % 2:
                chars.append(" ")
                continue
            cell = Cell(x, -(row + x) // 2)
            if cell in symbols:
                chars.append(symbols[cell])
            elif cell == (0, 0):
                chars.append(ORIGIN)
            else:
                chars.append(FREE)
        lines.append(" ".join(chars).rstrip())
    return "\n".join(lines) + "\n"


def cell_center(cell: Cell, radius: float = HEX_RADIUS) -> Tuple[float, float]:
    return 1.5 * radius * cell[0], SQRT3 / 2.0 * radius * half_row(cell)


def _hex_points(cx: float, cy: float, radius: float) -> str:
    points = []
    for k in range(6):
        angle = math.radians(60 * k)
        points.append(f"{cx + radius * math.cos(angle):.2f},"
                      f"{cy + radius * math.sin(angle):.2f}")
    return " ".join(points)


def state_color(state: str) -> str:
    return PALETTE[zlib.crc32(state.encode("utf-8")) % len(PALETTE)]


def render_svg(system: SystemConfig, radius: float = HEX_RADIUS, title: str = "") -> str:
    """
    SVG 1.1 document with one hexagon per occupied cell. Expanded
    particles are drawn as two joined hexagons; every head carries an
    arrow towards its orientation. A small cross marks the origin.
    """
    cells = list(system.occupancy) or [Cell(0, 0)]
    centers = [cell_center(c, radius) for c in cells + [Cell(0, 0)]]
    pad = radius * (MARGIN + 1)
    x0 = min(x for x, _ in centers) - pad
    y0 = min(y for _, y in centers) - pad
    width = max(x for x, _ in centers) + pad - x0
    height = max(y for _, y in centers) + pad - y0

    lines: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="{x0:.2f} {y0:.2f} {width:.2f} {height:.2f}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" '
        'markerWidth="4" markerHeight="4" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#000"/></marker></defs>',
    ]
    if title:
        lines.append(f"<title>{escape(title)}</title>")

    ox, oy = cell_center(Cell(0, 0), radius)
    s = radius / 4.0
    lines.append(f'<path class="origin" d="M {ox - s:.2f} {oy:.2f} L {ox + s:.2f} {oy:.2f} '
                 f'M {ox:.2f} {oy - s:.2f} L {ox:.2f} {oy + s:.2f}" '
                 f'stroke="#999" stroke-width="1"/>')

    for p in system:
        color = state_color(p.state)
        lines.append(f'<g class="particle" data-id="{p.id}" data-state={quoteattr(p.state)} '
                     f'data-shape="{p.shape.value}">')
        if p.shape is Shape.S2:
            (hx, hy), (tx, ty) = cell_center(p.head, radius), cell_center(p.tail, radius)
            lines.append(f'<line x1="{hx:.2f}" y1="{hy:.2f}" x2="{tx:.2f}" y2="{ty:.2f}" '
                         f'stroke="{color}" stroke-width="{radius:.2f}"/>')
        for cell in p.cells:
            cx, cy = cell_center(cell, radius)
            lines.append(f'<polygon data-cell="{cell.x},{cell.y}" '
                         f'points="{_hex_points(cx, cy, radius * 0.95)}" '
                         f'fill="{color}" stroke="#333" stroke-width="1"/>')

        hx, hy = cell_center(p.head, radius)
        dx, dy = OFFSETS[p.orientation]
        tx, ty = cell_center(Cell(p.head.x + dx, p.head.y + dy), radius)
        ax = hx + (tx - hx) * 0.3
        ay = hy + (ty - hy) * 0.3
        lines.append(f'<line class="orientation" x1="{hx:.2f}" y1="{hy:.2f}" '
                     f'x2="{ax:.2f}" y2="{ay:.2f}" stroke="#000" stroke-width="2" '
                     f'marker-end="url(#arrow)"/>')
        lines.append("</g>")

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
