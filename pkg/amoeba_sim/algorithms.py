# encoding: utf-8

"""
Transition functions.

An `Algorithm` is a finite state set, a start state and a transition
function `delta(state, shape, view, stream) -> (new_state, action)`.
`delta` sees nothing but its four arguments: the particle's own state and
shape, its `LocalView` and its random stream for the round.

The built-ins are small demonstrations with hand-checkable behaviour that
together exercise every action.

The surface walker reads only its `LocalView`: which slots are free and
which hold a particle in the anchor state. It does not consult backrefs.
"""

import re
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Tuple

from amoeba_sim.errors import UnknownAlgorithm
from amoeba_sim.geometry import Cell, Shape, hex_ring, neighbor
from amoeba_sim.particles import Action, LocalView, StateLabel, SystemConfig

Delta = Callable[[StateLabel, Shape, LocalView, object], Tuple[StateLabel, Action]]

ANCHOR = "anchor"
MAX_REPLICATOR_GENERATIONS = 4


@dataclass(frozen=True)
class Algorithm:
    name: str
    states: FrozenSet[StateLabel]
    start_state: StateLabel
    delta: Delta
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        if self.start_state not in self.states:
            raise ValueError(f"{self.name}: start state {self.start_state!r} "
                             f"is not in the state set")


def _idle(state, shape, view, stream):
    return state, Action.NULL


def _spin(state, shape, view, stream):
    return state, Action.TURN


def _oscillate(state, shape, view, stream):
    if shape is Shape.S1:
        return state, Action.EXPAND
    return state, Action.CONTRACT


def _random_walk(state, shape, view, stream):
    if shape is Shape.S2:
        return state, Action.CONTRACT
    if stream.random() < 0.5:
        return state, Action.TURN
    return state, Action.EXPAND


def idle() -> Algorithm:
    return Algorithm("idle", {"idle"}, "idle", _idle,
                     "every particle does nothing, forever")


def spinner() -> Algorithm:
    return Algorithm("spinner", {"spin"}, "spin", _spin,
                     "every particle turns clockwise each round")


def oscillator() -> Algorithm:
    return Algorithm("oscillator", {"moving"}, "moving", _oscillate,
                     "expand when contracted, contract when expanded: "
                     "one cell forward every two rounds")


def random_walker() -> Algorithm:
    return Algorithm("random_walker", {"wander"}, "wander", _random_walk,
                     "a contracted particle turns or expands with probability "
                     "1/2 each; an expanded one contracts")


def _anchor_clockwise_slot(view: LocalView) -> Optional[int]:
    """
    The first slot that is free while the next slot clockwise holds an
    anchor: moving there keeps the structure on the right-hand side.
    """
    for i in range(6):
        ahead = view[(i + 1) % 6]
        if view.is_free(i) and ahead is not None and ahead.state == ANCHOR:
            return i
    return None


def _walk_surface(state, shape, view, stream):
    if state == ANCHOR:
        return state, Action.NULL
    if shape is Shape.S2:
        return state, Action.CONTRACT

    slot = _anchor_clockwise_slot(view)
    if slot is None:
        return state, Action.NULL
    if slot == 0:
        return state, Action.EXPAND
    return state, Action.TURN


def surface_walker() -> Algorithm:
    return Algorithm("surface_walker", {"walker", ANCHOR}, "walker", _walk_surface,
                     "a walker circles a static structure of anchor particles "
                     "clockwise by turning, expanding and contracting")


def _replicator_delta(generations: int) -> Delta:

    def delta(state, shape, view, stream):
        if state == "done":
            return state, Action.NULL

        generation = int(state[1:])
        if shape is Shape.S2:
            after = f"g{generation + 1}" if generation < generations else "done"
            return after, Action.DIVIDE

        free = [view.is_free(i) for i in range(6)]
        # grow away from an existing neighbor, along the chain axis
        if all(free) or (free[0] and not free[3]):
            return state, Action.EXPAND
        if any(free[i] and not free[(i + 3) % 6] for i in range(6)):
            return state, Action.TURN
        if free[0]:
            return state, Action.EXPAND
        if any(free):
            return state, Action.TURN
        return state, Action.NULL

    return delta


def replicator(generations: int) -> Algorithm:
    if not 1 <= generations <= MAX_REPLICATOR_GENERATIONS:
        raise UnknownAlgorithm(f"replicator_{generations}")

    states = {f"g{i}" for i in range(1, generations + 1)} | {"done"}
    return Algorithm(f"replicator_{generations}", states, "g1",
                     _replicator_delta(generations),
                     f"expand then divide for {generations} generation(s); "
                     f"a lone particle ends as {2 ** generations} particles")


def _reap(state, shape, view, stream):
    if state == ANCHOR:
        return state, Action.NULL
    if shape is Shape.S2:
        return state, Action.CONTRACT
    if any(info.state == ANCHOR for _, info in view.occupied_slots()):
        return state, Action.KILL
    return state, Action.NULL


def reaper() -> Algorithm:
    return Algorithm("reaper", {"marked", ANCHOR}, "marked", _reap,
                     "marked particles next to an anchor kill themselves")


def _script_delta(programs: Mapping[str, str]) -> Delta:

    def delta(state, shape, view, stream):
        name, pc = state.rsplit(":", 1)
        program = programs[name]
        pc = int(pc)
        if pc >= len(program):
            return state, Action.NULL
        return f"{name}:{pc + 1}", Action(program[pc])

    return delta


def script(programs: Mapping[str, str]) -> Algorithm:
    """
    Every particle runs a fixed action program, e.g. {"mover": "TEC"}.
    States are `program:pc`; a particle starts at `program:0` and idles
    once its program is exhausted. A failed action is retried.
    """
    if not programs:
        raise ValueError("the script algorithm needs at least one program")

    states = set()
    for name, program in programs.items():
        if ":" in name:
            raise ValueError(f"program name {name!r} must not contain ':'")
        for letter in program:
            Action(letter)
        states.update(f"{name}:{pc}" for pc in range(len(program) + 1))

    first = sorted(programs)[0]
    return Algorithm("script", states, f"{first}:0", _script_delta(dict(programs)),
                     "each particle follows its action program "
                     "(N, T, E, C, D, K letters) from the run configuration")


_REGISTRY: Dict[str, Callable[[], Algorithm]] = {
    "idle": idle,
    "spinner": spinner,
    "oscillator": oscillator,
    "random_walker": random_walker,
    "surface_walker": surface_walker,
    "reaper": reaper,
}

_REPLICATOR_NAME = re.compile(r"^replicator_(\d+)$")


def builtin(name: str, scripts: Optional[Mapping[str, str]] = None) -> Algorithm:
    if name in _REGISTRY:
        return _REGISTRY[name]()

    match = _REPLICATOR_NAME.match(name)
    if match:
        return replicator(int(match.group(1)))

    if name == "script":
        if not scripts:
            raise UnknownAlgorithm("script (no programs configured)")
        return script(scripts)

    raise UnknownAlgorithm(name)


def available() -> List[Tuple[str, str]]:
    algorithms = [factory() for factory in _REGISTRY.values()]
    algorithms += [replicator(k) for k in range(1, MAX_REPLICATOR_GENERATIONS + 1)]

    entries = [(a.name, a.description) for a in algorithms]
    entries.append(("script", "each particle follows a fixed action program "
                              "from the run configuration"))
    return sorted(entries)


def ring_cells(ring_size: int, center: Cell = Cell(0, 0)) -> List[Cell]:
    """
    A closed ring of `ring_size` cells: the hexagonal ring of radius
    ring_size / 6 around `center`, or the three-cell triangle.
    """
    if ring_size == 3:
        return [Cell(*center), neighbor(center, 1), neighbor(center, 0)]
    if ring_size >= 6 and ring_size % 6 == 0:
        return hex_ring(center, ring_size // 6)
    raise ValueError(f"no closed ring of {ring_size} cells")


def walker_start(structure) -> Cell:
    """The free cell right above the topmost structure cell of the x = 0 column."""
    column = [c.y for c in structure if c.x == 0]
    return Cell(0, max(column) + 1)


def surface_walker_system(ring_size: int, orientation: int = 0) -> SystemConfig:
    cells = ring_cells(ring_size)
    specs = [(ANCHOR, Shape.S1, cell, 0) for cell in cells]
    specs.append(("walker", Shape.S1, walker_start(cells), orientation))
    return SystemConfig.from_specs(specs)


def walker_circuit_length(ring_size: int, orientation: int = 0) -> int:
    """
    Rounds needed by a surface walker starting contracted at `walker_start`
    to be contracted on its start cell again, counted on the geometry
    alone: each step costs one round per turn plus an expansion and a
    contraction.
    """
    structure = set(ring_cells(ring_size))
    start = walker_start(structure)
    cell, r = start, orientation % 6
    rounds = 0

    for _ in range(6 * len(structure) + 12):
        for i in range(6):
            target = neighbor(cell, r + i)
            if target not in structure and neighbor(cell, r + i + 1) in structure:
                break
        else:
            raise ValueError("walker is not next to the structure")

        rounds += i + 2
        cell, r = target, (r + i) % 6
        if cell == start:
            return rounds

    raise ValueError("walker did not return to its start cell")
