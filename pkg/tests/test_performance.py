"""
Throughput of large idle/spinner systems
"""

import time

import pytest

from helpers import scripted_by_state

from amoeba_sim.engine import RandomnessSource, iter_rounds
from amoeba_sim.geometry import Cell, Shape
from amoeba_sim.particles import Action, ParticleConfig, SystemConfig

SIDE = 100
ROUNDS = 1000


@pytest.mark.slow
def test_ten_thousand_particles_thousand_rounds():
    mixed = scripted_by_state("idle_spin", {"idle": ("idle", Action.NULL),
                                            "spin": ("spin", Action.TURN)})
    particles = [ParticleConfig(x * SIDE + y, "spin" if (x + y) % 2 else "idle",
                                Shape.S1, Cell(x, y), 0)
                 for x in range(SIDE) for y in range(SIDE)]
    system = SystemConfig(particles)

    started = time.perf_counter()
    for after, report in iter_rounds(system, mixed, RandomnessSource(0), rounds=ROUNDS):
        assert report.connected_after
    elapsed = time.perf_counter() - started

    assert report.round == ROUNDS
    assert after.cells() == system.cells()
    assert elapsed < 60.0
