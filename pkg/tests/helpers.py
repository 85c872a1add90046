"""
Helper builders and custom assert methods for particle system tests
"""

from pathlib import Path

import numpy as np

from amoeba_sim.algorithms import Algorithm
from amoeba_sim.engine import Proposal
from amoeba_sim.geometry import Cell, Shape, neighbor, occupied_cells
from amoeba_sim.particles import Action, ParticleConfig, SystemConfig
from amoeba_sim.serialization import load_config

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(fixture_filename):
    return FIXTURES / fixture_filename


def load_fixture(fixture_filename):
    """
    Load a run configuration fixture from disk. The format is detected
    from the file extension.
    """
    return load_config(fixture_path(fixture_filename))


def fixtures_for(test_name):
    return test_name + ".yaml", test_name + ".json"


def s1(pid, x, y, r=0, state="q0"):
    return ParticleConfig(pid, state, Shape.S1, Cell(x, y), r % 6)


def s2(pid, x, y, r=0, state="q0"):
    return ParticleConfig(pid, state, Shape.S2, Cell(x, y), r % 6)


def system_of(*particles):
    return SystemConfig(particles)


def line_of(n, start=(0, 0), direction=0, state="q0", r=None):
    """n contracted particles in a straight line along `direction`."""
    r = direction if r is None else r
    cell = Cell(*start)
    particles = []
    for pid in range(n):
        particles.append(ParticleConfig(pid, state, Shape.S1, cell, r))
        cell = neighbor(cell, direction)
    return SystemConfig(particles)


def proposals_of(intents):
    """{id: action} or {id: (state, action)} to a proposal map."""
    proposals = {}
    for pid, intent in intents.items():
        if isinstance(intent, Action):
            proposals[pid] = Proposal("q0", intent)
        else:
            proposals[pid] = Proposal(*intent)
    return proposals


def scripted_by_state(name, table, states=None):
    """
    An algorithm whose transition depends on the state only:
    table[state] = (new_state, action).
    """
    states = set(states or table) | {new for new, _ in table.values()}
    start = next(iter(table))

    def delta(state, shape, view, stream):
        return table[state]

    return Algorithm(name, states, start, delta)


def random_connected_system(rng: np.random.Generator, size: int) -> SystemConfig:
    """
    Grow a random connected configuration of `size` particles: each new
    particle is placed on a free cell next to an occupied one, contracted
    or expanded with a random orientation.
    """
    occupied = {}
    particles = []
    first = ParticleConfig(0, "q0", Shape.S1, Cell(0, 0), int(rng.integers(6)))
    particles.append(first)
    occupied[first.head] = 0

    while len(particles) < size:
        anchor = list(occupied)[int(rng.integers(len(occupied)))]
        head = neighbor(anchor, int(rng.integers(6)))
        if head in occupied:
            continue
        shape = Shape.S2 if rng.random() < 0.5 else Shape.S1
        r = int(rng.integers(6))
        cells = occupied_cells(head, r, shape)
        if any(c in occupied for c in cells):
            shape = Shape.S1
            cells = [head]
        p = ParticleConfig(len(particles), "q%d" % int(rng.integers(3)), shape, head, r)
        particles.append(p)
        for c in cells:
            occupied[c] = p.id

    return SystemConfig(particles)


def assert_particle_unchanged(before: ParticleConfig, after: ParticleConfig):
    assert before == after, \
        f"Expected particle {before.id} to be unchanged, but it went from {before} to {after}"


def assert_systems_eq(s1_, s2_):
    assert len(s1_) == len(s2_), \
        f"Expected {len(s2_)} particles but found {len(s1_)}"

    for p, q in zip(s1_, s2_):
        assert p == q, f"Expected particle {q} but found {p}"
