# encoding: utf-8

"""
Particle and system configurations.

A particle configuration is the tuple (state, shape, head, orientation)
plus an id that gives the system its order. A `SystemConfig` is an
immutable snapshot of all particles together with the index of occupied
cells; the engine builds a new one for every committed round.
"""

from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, \
    Optional, Sequence, Tuple

import networkx as nx

from amoeba_sim.errors import DuplicateOccupancy, InadmissibleShape
from amoeba_sim.geometry import (
    Cell,
    Direction,
    Shape,
    cell_neighborhood,
    neighbor,
    occupied_cells,
    particle_neighborhood,
)

ParticleId = int
StateLabel = str

VIEW_SIZE = 8


class Action(str, Enum):
    NULL = "N"
    TURN = "T"
    EXPAND = "E"
    CONTRACT = "C"
    DIVIDE = "D"
    KILL = "K"

    def admissible(self, shape: Shape) -> bool:
        return shape in ADMISSIBLE_SHAPES[self]


ADMISSIBLE_SHAPES = {
    Action.NULL: frozenset((Shape.S1, Shape.S2)),
    Action.TURN: frozenset((Shape.S1, Shape.S2)),
    Action.EXPAND: frozenset((Shape.S1,)),
    Action.CONTRACT: frozenset((Shape.S2,)),
    Action.DIVIDE: frozenset((Shape.S2,)),
    Action.KILL: frozenset((Shape.S1,)),
}


class ParticleConfig(NamedTuple):
    id: ParticleId
    state: StateLabel
    shape: Shape
    head: Cell
    orientation: Direction

    @property
    def cells(self) -> List[Cell]:
        return occupied_cells(self.head, self.orientation, self.shape)

    @property
    def tail(self) -> Cell:
        return self.cells[-1]

    @property
    def neighborhood(self) -> List[Cell]:
        return particle_neighborhood(self.head, self.orientation, self.shape)


class NeighborInfo(NamedTuple):
    """
    What a particle perceives of one neighboring particle: its state, its
    shape, and which of the neighbor's own numbered slots point back.
    """
    state: StateLabel
    shape: Shape
    backrefs: FrozenSet[int]


def build_occupancy(particles: Iterable[ParticleConfig]) -> Dict[Cell, ParticleId]:
    occupancy = {}
    for p in particles:
        for cell in occupied_cells(p.head, p.orientation, p.shape):
            other = occupancy.get(cell)
            if other is not None:
                raise DuplicateOccupancy(cell, other, p.id)
            occupancy[cell] = p.id
    return occupancy


class SystemConfig:
    """
    Ordered, immutable collection of particle configurations.

    Building a SystemConfig builds its occupancy index, so an instance
    always satisfies cell exclusivity.
    """

    __slots__ = ("_particles", "_next_id", "_occupancy", "_by_id",
                 "_neighborhoods")

    def __init__(self, particles: Sequence[ParticleConfig],
                 next_id: Optional[ParticleId] = None):
        self._particles = tuple(particles)
        self._occupancy = build_occupancy(self._particles)
        self._by_id = {p.id: p for p in self._particles}

        if next_id is None:
            next_id = max(self._by_id, default=-1) + 1
        self._next_id = next_id
        self._neighborhoods = {}

    @classmethod
    def from_specs(cls, specs: Iterable[Tuple[StateLabel, Shape, Cell, Direction]]) \
            -> "SystemConfig":
        """
        Build a system from (state, shape, head, orientation) tuples,
        numbering particles in input order.
        """
        particles = [ParticleConfig(i, state, Shape(shape), Cell(*head), orientation % 6)
                     for i, (state, shape, head, orientation) in enumerate(specs)]
        return cls(particles)

    def with_particles(self, particles: Sequence[ParticleConfig]) -> "SystemConfig":
        """
        A system of updated records for the same particles on the same
        cells, sharing this system's occupancy index. The caller
        guarantees that every particle id still covers the same cells.
        """
        system = SystemConfig.__new__(SystemConfig)
        system._particles = tuple(particles)
        system._occupancy = self._occupancy
        system._by_id = {p.id: p for p in system._particles}
        system._next_id = self._next_id
        system._neighborhoods = {}
        return system

    @property
    def particles(self) -> Tuple[ParticleConfig, ...]:
        return self._particles

    @property
    def occupancy(self) -> Dict[Cell, ParticleId]:
        return self._occupancy

    @property
    def next_id(self) -> ParticleId:
        return self._next_id

    def __len__(self):
        return len(self._particles)

    def __iter__(self) -> Iterator[ParticleConfig]:
        return iter(self._particles)

    def __eq__(self, other):
        if not isinstance(other, SystemConfig):
            return NotImplemented
        return self._particles == other._particles and self._next_id == other._next_id

    def __hash__(self):
        return hash((self._particles, self._next_id))

    def __repr__(self):
        return f"SystemConfig({list(self._particles)!r}, next_id={self._next_id})"

    def get(self, pid: ParticleId) -> ParticleConfig:
        return self._by_id[pid]

    def occupant(self, cell: Cell) -> Optional[ParticleConfig]:
        pid = self._occupancy.get(cell)
        return None if pid is None else self._by_id[pid]

    def cells(self) -> FrozenSet[Cell]:
        return frozenset(self._occupancy)

    def neighborhood(self, pid: ParticleId) -> List[Cell]:
        cached = self._neighborhoods.get(pid)
        if cached is None:
            cached = self._by_id[pid].neighborhood
            self._neighborhoods[pid] = cached
        return cached


def particles_connected(u: ParticleConfig, v: ParticleConfig) -> bool:
    v_cells = v.cells
    return any(cell in v_cells for cell in u.neighborhood)


def connectivity_graph(system: SystemConfig) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(p.id for p in system)

    occupancy = system.occupancy
    for p in system:
        for cell in system.neighborhood(p.id):
            other = occupancy.get(cell)
            if other is not None:
                graph.add_edge(p.id, other)
    return graph


def is_connected(system: SystemConfig) -> bool:
    if len(system) <= 1:
        return True
    return nx.is_connected(connectivity_graph(system))


def _view_entries(system: SystemConfig, p: ParticleConfig) \
        -> Tuple[Optional[NeighborInfo], ...]:
    own_cells = p.cells
    entries = []
    for cell in system.neighborhood(p.id):
        occupant_id = system.occupancy.get(cell)
        if occupant_id is None:
            entries.append(None)
            continue

        occupant = system.get(occupant_id)
        backrefs = frozenset(j for j, c in enumerate(system.neighborhood(occupant_id))
                             if c in own_cells)
        entries.append(NeighborInfo(occupant.state, occupant.shape, backrefs))

    entries.extend([None] * (VIEW_SIZE - len(entries)))
    return tuple(entries)


class LocalView:
    """
    The eight neighbor slots a particle perceives. A slot holds a
    `NeighborInfo` or None for an empty slot (free cell, or a slot index
    beyond the particle's neighborhood size).

    A view bound to a snapshot computes its entries on first access.
    """

    __slots__ = ("_system", "_particle", "_entries")

    def __init__(self, system: Optional[SystemConfig] = None,
                 particle: Optional[ParticleConfig] = None,
                 entries: Optional[Sequence[Optional[NeighborInfo]]] = None):
        self._system = system
        self._particle = particle
        self._entries = None
        if entries is not None:
            entries = tuple(entries)
            if len(entries) != VIEW_SIZE:
                raise ValueError(f"a local view has exactly {VIEW_SIZE} slots")
            self._entries = entries

    @classmethod
    def of(cls, *entries: Optional[NeighborInfo]) -> "LocalView":
        padded = tuple(entries) + (None,) * (VIEW_SIZE - len(entries))
        return cls(entries=padded)

    @property
    def entries(self) -> Tuple[Optional[NeighborInfo], ...]:
        if self._entries is None:
            self._entries = _view_entries(self._system, self._particle)
        return self._entries

    def __getitem__(self, i: int) -> Optional[NeighborInfo]:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return VIEW_SIZE

    def __eq__(self, other):
        if not isinstance(other, LocalView):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return f"LocalView({list(self.entries)!r})"

    def is_free(self, i: int) -> bool:
        return self.entries[i] is None

    def occupied_slots(self) -> List[Tuple[int, NeighborInfo]]:
        return [(i, info) for i, info in enumerate(self.entries) if info is not None]


def build_local_view(system: SystemConfig, p: ParticleConfig) -> LocalView:
    return LocalView(system, p)


def apply_action(p: ParticleConfig, action: Action, new_state: StateLabel,
                 copy_id: Optional[ParticleId] = None) -> List[ParticleConfig]:
    """
    Successor configuration(s) of a particle executing `action`.

    Returns an empty list for Kill and two particles (parent first) for
    Divide; the copy is numbered `copy_id`.
    """
    if not action.admissible(p.shape):
        raise InadmissibleShape(action, p.shape)

    h, r = p.head, p.orientation

    if action is Action.NULL:
        return [p._replace(state=new_state)]

    if action is Action.TURN:
        if p.shape is Shape.S1:
            return [p._replace(state=new_state, orientation=(r + 1) % 6)]
        return [p._replace(state=new_state, head=neighbor(h, r + 3),
                           orientation=(r + 3) % 6)]

    if action is Action.EXPAND:
        return [p._replace(state=new_state, shape=Shape.S2, head=neighbor(h, r))]

    if action is Action.CONTRACT:
        return [p._replace(state=new_state, shape=Shape.S1)]

    if action is Action.DIVIDE:
        if copy_id is None:
            raise ValueError("Divide needs an id for the copy")
        parent = p._replace(state=new_state, shape=Shape.S1)
        copy = ParticleConfig(copy_id, new_state, Shape.S1, neighbor(h, r + 3), r)
        return [parent, copy]

    # Kill
    return []
