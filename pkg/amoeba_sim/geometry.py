# encoding: utf-8

"""
Geometry of the infinite hexagonal grid.

Cells are addressed by integer pairs. Direction `d` is an integer taken
modulo 6; the neighbor of a cell in direction `d` is found by adding
`OFFSETS[d]`. Directions increase clockwise.
"""

from enum import Enum
from typing import List, NamedTuple, Set

Direction = int

OFFSETS = (
    (0, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, 0),
    (-1, 1),
)

DIRECTIONS = range(6)


class Cell(NamedTuple):
    x: int
    y: int


class Shape(str, Enum):
    S1 = "s1"
    S2 = "s2"

    @property
    def size(self) -> int:
        return 1 if self is Shape.S1 else 2

    @property
    def neighborhood_size(self) -> int:
        return 6 if self is Shape.S1 else 8


def opposite(d: Direction) -> Direction:
    return (d + 3) % 6


def neighbor(c: Cell, d: Direction) -> Cell:
    dx, dy = OFFSETS[d % 6]
    return Cell(c[0] + dx, c[1] + dy)


def cell_neighborhood(c: Cell) -> Set[Cell]:
    return {neighbor(c, d) for d in DIRECTIONS}


def is_adjacent(a: Cell, b: Cell) -> bool:
    return (b[0] - a[0], b[1] - a[1]) in OFFSETS


def occupied_cells(h: Cell, r: Direction, s: Shape) -> List[Cell]:
    """
    Cells covered by a particle, head first. The tail of an expanded
    particle lies behind the head, at direction r + 3.
    """
    if s is Shape.S1:
        return [h]
    return [h, neighbor(h, r + 3)]


def particle_neighborhood(h: Cell, r: Direction, s: Shape) -> List[Cell]:
    """
    The ordered neighborhood of a particle. Entry 0 is the cell the
    particle faces and the numbering continues clockwise around the
    particle, so consecutive entries (cyclically) are adjacent cells.
    """
    if s is Shape.S1:
        return [neighbor(h, r + i) for i in DIRECTIONS]

    t = neighbor(h, r + 3)
    return [
        neighbor(h, r),
        neighbor(h, r + 1),
        neighbor(h, r + 2),
        neighbor(t, r + 2),
        neighbor(t, r + 3),
        neighbor(t, r + 4),
        neighbor(h, r + 4),
        neighbor(h, r + 5),
    ]


def distance(a: Cell, b: Cell) -> int:
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    return (abs(dx) + abs(dy) + abs(dx + dy)) // 2


def rotate(c: Cell, k: int = 1, center: Cell = Cell(0, 0)) -> Cell:
    """
    Rotate `c` by k * 60 degrees clockwise around `center`, i.e. the
    offset of direction d is carried onto the offset of direction d + k.
    """
    x = c[0] - center[0]
    y = c[1] - center[1]
    for _ in range(k % 6):
        x, y = x + y, -x
    return Cell(center[0] + x, center[1] + y)


def rotate_direction(d: Direction, k: int = 1) -> Direction:
    return (d + k) % 6


def translate(c: Cell, dx: int, dy: int) -> Cell:
    return Cell(c[0] + dx, c[1] + dy)


def hex_ring(center: Cell, radius: int) -> List[Cell]:
    """
    The cells at exactly `radius` steps from `center`, clockwise, starting
    with the cell straight along direction 0.
    """
    if radius == 0:
        return [Cell(*center)]

    cell = Cell(center[0] + OFFSETS[0][0] * radius,
                center[1] + OFFSETS[0][1] * radius)
    ring = []
    for side in range(6):
        for _ in range(radius):
            ring.append(cell)
            cell = neighbor(cell, side + 2)
    return ring
