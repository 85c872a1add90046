# encoding: utf-8

"""
Synchronous round executor.

One round reads a single snapshot: every particle gets its local view and
samples its transition, conflicts are resolved, and all successful actions
are applied at once. A particle whose action fails keeps its whole
configuration, state included.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Tuple

import numpy as np

from amoeba_sim.algorithms import Algorithm
from amoeba_sim.errors import (
    AlgorithmStateError,
    DisconnectedError,
    DuplicateOccupancy,
    InternalExclusivityViolation,
    NotConnected,
    StrictInitViolation,
    UnknownState,
)
from amoeba_sim.geometry import Cell, Shape, neighbor
from amoeba_sim.particles import (
    Action,
    ParticleConfig,
    ParticleId,
    StateLabel,
    SystemConfig,
    apply_action,
    build_local_view,
    build_occupancy,
    is_connected,
)

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1

# Cells freed by a Kill can be entered in the same round, like cells freed
# by a contraction. Recorded in trace headers.
DEVIATION_FLAGS = ("kill-freed-expansion",)


class ConflictPolicy(str, Enum):
    LOWEST_ID = "lowest-id"
    SEEDED = "seeded"


class DisconnectPolicy(str, Enum):
    HALT = "halt"
    WARN = "warn"


class Outcome(str, Enum):
    APPLIED = "applied"
    FAILED_INADMISSIBLE = "failed-inadmissible"
    FAILED_OCCUPIED = "failed-occupied"
    FAILED_CONFLICT = "failed-conflict"


@dataclass(frozen=True)
class EnginePolicy:
    conflict_policy: ConflictPolicy = ConflictPolicy.LOWEST_ID
    disconnect_policy: DisconnectPolicy = DisconnectPolicy.HALT
    strict_init: bool = False


class Proposal(NamedTuple):
    state: StateLabel
    action: Action


@dataclass
class RoundReport:
    round: int
    outcomes: Dict[ParticleId, Tuple[Action, Outcome]] = field(default_factory=dict)
    created: List[ParticleId] = field(default_factory=list)
    removed: List[ParticleId] = field(default_factory=list)
    connected_after: bool = True

    def applied(self, action: Optional[Action] = None) -> List[ParticleId]:
        return [pid for pid, (a, outcome) in self.outcomes.items()
                if outcome is Outcome.APPLIED and (action is None or a is action)]

    def failed(self) -> List[ParticleId]:
        return [pid for pid, (_, outcome) in self.outcomes.items()
                if outcome is not Outcome.APPLIED]


def _zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


class ParticleStream:
    """
    Random draws for one particle in one round. The underlying generator is
    created on first use; most transition functions never draw.
    """

    __slots__ = ("_key", "_counter", "_generator")

    def __init__(self, key: int, counter: Tuple[int, int, int, int]):
        self._key = key
        self._counter = counter
        self._generator = None

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            bit_generator = np.random.Philox(counter=list(self._counter), key=self._key)
            self._generator = np.random.Generator(bit_generator)
        return self._generator

    def random(self) -> float:
        return float(self.generator.random())

    def integers(self, low: int, high: Optional[int] = None) -> int:
        return int(self.generator.integers(low, high))

    def choice(self, options):
        return options[self.integers(len(options))]


class RandomnessSource:
    """
    Counter-based random streams. The stream of a particle in a round
    depends only on (root_seed, particle id, round), so draws do not depend
    on the order in which particles are evaluated.
    """

    def __init__(self, root_seed: int = 0):
        self.root_seed = root_seed & SEED_MASK

    def stream(self, pid: ParticleId, round: int) -> ParticleStream:
        return ParticleStream(self.root_seed, (0, 0, round & SEED_MASK, pid & SEED_MASK))

    def conflict_index(self, round: int, cell: Cell, n: int) -> int:
        seq = np.random.SeedSequence(self.root_seed,
                                     spawn_key=(round, _zigzag(cell[0]), _zigzag(cell[1])))
        return int(np.random.default_rng(seq).integers(n))


def validate_initial(system: SystemConfig, algorithm: Algorithm,
                     strict: bool = False) -> None:
    """
    Raise a ConfigValidationError unless `system` can start a run of
    `algorithm`. Strict mode additionally requires every particle to be
    contracted and in the start state.
    """
    build_occupancy(system.particles)

    if not is_connected(system):
        raise NotConnected()

    for p in system:
        if p.state not in algorithm.states:
            raise UnknownState(p.id, p.state, algorithm.name)

        if strict:
            if p.shape is not Shape.S1:
                raise StrictInitViolation(p.id, "initial particles must be contracted (s1)")
            if p.state != algorithm.start_state:
                raise StrictInitViolation(
                    p.id, f"initial state must be {algorithm.start_state!r}, "
                          f"not {p.state!r}")


def propose(system: SystemConfig, algorithm: Algorithm, rng: RandomnessSource,
            round: int) -> Dict[ParticleId, Proposal]:
    proposals = {}
    delta = algorithm.delta
    states = algorithm.states

    for p in system:
        view = build_local_view(system, p)
        new_state, action = delta(p.state, p.shape, view, rng.stream(p.id, round))
        if new_state not in states:
            raise AlgorithmStateError(algorithm.name, p.id, new_state)
        proposals[p.id] = Proposal(new_state, Action(action))

    return proposals


def resolve(system: SystemConfig, proposals: Mapping[ParticleId, Proposal],
            policy: EnginePolicy = EnginePolicy(),
            rng: Optional[RandomnessSource] = None,
            round: int = 0) -> Dict[ParticleId, Outcome]:
    results = {}
    freed = set()
    expanders = []

    for p in system:
        action = proposals[p.id].action
        if not action.admissible(p.shape):
            results[p.id] = Outcome.FAILED_INADMISSIBLE
        elif action is Action.CONTRACT:
            freed.add(neighbor(p.head, p.orientation + 3))
        elif action is Action.KILL:
            freed.add(p.head)
        elif action is Action.EXPAND:
            expanders.append(p)

    # Contract and Kill only free cells and Expand, Turn and Divide free
    # none, so one pass over the freed set is enough.
    contenders = defaultdict(list)
    occupancy = system.occupancy
    for p in expanders:
        target = neighbor(p.head, p.orientation)
        if target in occupancy and target not in freed:
            results[p.id] = Outcome.FAILED_OCCUPIED
        else:
            contenders[target].append(p.id)

    for target, ids in contenders.items():
        ids.sort()
        if len(ids) == 1 or policy.conflict_policy is ConflictPolicy.LOWEST_ID:
            winner = ids[0]
        else:
            if rng is None:
                raise ValueError("seeded conflict resolution needs a RandomnessSource")
            winner = ids[rng.conflict_index(round, target, len(ids))]

        for pid in ids:
            results[pid] = Outcome.APPLIED if pid == winner else Outcome.FAILED_CONFLICT

    for p in system:
        results.setdefault(p.id, Outcome.APPLIED)

    return results


# Null and Turn never change which cells a particle covers.
_CELL_CHANGING = frozenset((Action.EXPAND, Action.CONTRACT, Action.DIVIDE, Action.KILL))


def commit(system: SystemConfig, proposals: Mapping[ParticleId, Proposal],
           results: Mapping[ParticleId, Outcome], round: int = 0,
           connected_before: Optional[bool] = None) -> Tuple[SystemConfig, RoundReport]:
    """
    Apply every Applied proposal simultaneously. Failed particles are
    carried over unchanged; divide copies are appended with fresh ids.

    When no particle changed its cells the occupancy index is shared with
    `system`, and connectivity is carried over from `connected_before` if
    given. Otherwise exclusivity and connectivity are recomputed.
    """
    report = RoundReport(round=round)
    particles: List[ParticleConfig] = []
    copies: List[ParticleConfig] = []
    next_id = system.next_id
    cells_changed = False

    for p in system:
        proposal = proposals[p.id]
        outcome = results[p.id]
        action = proposal.action
        report.outcomes[p.id] = (action, outcome)

        if outcome is not Outcome.APPLIED:
            particles.append(p)
            continue

        if action is Action.NULL:
            particles.append(p if proposal.state == p.state
                             else p._replace(state=proposal.state))
            continue
        if action is Action.TURN and p.shape is Shape.S1:
            particles.append(p._replace(state=proposal.state,
                                        orientation=(p.orientation + 1) % 6))
            continue

        cells_changed = cells_changed or action in _CELL_CHANGING
        if action is Action.DIVIDE:
            parent, copy = apply_action(p, Action.DIVIDE, proposal.state, copy_id=next_id)
            next_id += 1
            particles.append(parent)
            copies.append(copy)
            report.created.append(copy.id)
        elif action is Action.KILL:
            report.removed.append(p.id)
        else:
            particles.extend(apply_action(p, action, proposal.state))

    if not cells_changed:
        committed = system.with_particles(particles)
        if connected_before is None:
            connected_before = is_connected(committed)
        report.connected_after = connected_before
        return committed, report

    try:
        committed = SystemConfig(particles + copies, next_id=next_id)
    except DuplicateOccupancy as error:
        raise InternalExclusivityViolation(f"round {round}: {error}") from error

    report.connected_after = is_connected(committed)
    return committed, report


def step(system: SystemConfig, algorithm: Algorithm, rng: RandomnessSource,
         policy: EnginePolicy = EnginePolicy(), round: int = 1,
         connected_before: Optional[bool] = None) -> Tuple[SystemConfig, RoundReport]:
    proposals = propose(system, algorithm, rng, round)
    results = resolve(system, proposals, policy, rng, round)
    committed, report = commit(system, proposals, results, round, connected_before)

    logger.debug("round %d: %d particles, %d applied, %d failed, connected=%s",
                 round, len(committed), len(report.applied()), len(report.failed()),
                 report.connected_after)

    if not report.connected_after:
        if policy.disconnect_policy is DisconnectPolicy.HALT:
            raise DisconnectedError(report, committed)
        logger.warning("round %d: configuration is disconnected", round)

    return committed, report


def iter_rounds(system: SystemConfig, algorithm: Algorithm, rng: RandomnessSource,
                policy: EnginePolicy = EnginePolicy(),
                rounds: int = 0) -> Iterator[Tuple[SystemConfig, RoundReport]]:
    """
    Yield the committed configuration and report of rounds 1..rounds.
    Stops early once the system is empty.
    """
    connected = is_connected(system)
    for t in range(1, rounds + 1):
        if not len(system):
            logger.info("system is empty after round %d", t - 1)
            return
        system, report = step(system, algorithm, rng, policy, t,
                              connected_before=connected)
        connected = report.connected_after
        yield system, report


def run(system: SystemConfig, algorithm: Algorithm, rng: RandomnessSource,
        policy: EnginePolicy = EnginePolicy(),
        rounds: int = 0) -> Tuple[SystemConfig, List[RoundReport]]:
    reports = []
    final = system
    for final, report in iter_rounds(system, algorithm, rng, policy, rounds):
        reports.append(report)
    return final, reports
