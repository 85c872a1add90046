# encoding: utf-8

"""
File schemas: run configurations and trace records.
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from amoeba_sim.engine import (
    ConflictPolicy,
    DisconnectPolicy,
    EnginePolicy,
    Outcome,
)
from amoeba_sim.geometry import Cell, Shape
from amoeba_sim.particles import Action, ParticleConfig, SystemConfig, is_connected

FORMAT_VERSION = 1


class FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ParticleModel(FileModel):

    state: str = Field(
        description="State label, a member of the algorithm's state set",
        examples=["moving", "anchor", "mover:0"],
    )
    shape: Shape = Field(
        Shape.S1,
        description="s1 (contracted, one cell) or s2 (expanded, two cells)",
        examples=["s1", "s2"],
    )
    head: Tuple[int, int] = Field(
        description="Head cell as [x, y]",
        examples=[[0, 0], [2, -1]],
    )
    orientation: int = Field(
        0,
        ge=0,
        le=5,
        description="Direction the particle faces; slot 0 of its view",
        examples=[0, 3],
    )

    def spec(self):
        return self.state, self.shape, Cell(*self.head), self.orientation


class TraceParticleModel(ParticleModel):

    id: int = Field(
        ge=0,
        description="Particle id, assigned in order of creation",
        examples=[0, 7],
    )

    @staticmethod
    def from_particle(p: ParticleConfig) -> "TraceParticleModel":
        return TraceParticleModel(id=p.id, state=p.state, shape=p.shape,
                                  head=(p.head.x, p.head.y), orientation=p.orientation)

    def to_particle(self) -> ParticleConfig:
        return ParticleConfig(self.id, self.state, self.shape, Cell(*self.head),
                              self.orientation)


class PolicyModel(FileModel):

    conflict: ConflictPolicy = Field(
        ConflictPolicy.LOWEST_ID,
        description="Who wins when several particles expand into one cell",
        examples=["lowest-id", "seeded"],
    )
    on_disconnect: DisconnectPolicy = Field(
        DisconnectPolicy.HALT,
        description="Stop the run, or log a warning and continue",
        examples=["halt", "warn"],
    )
    strict_init: bool = Field(
        False,
        description="Require all initial particles contracted and in the start state",
    )

    def engine_policy(self) -> EnginePolicy:
        return EnginePolicy(conflict_policy=self.conflict,
                            disconnect_policy=self.on_disconnect,
                            strict_init=self.strict_init)


class RunConfig(FileModel):

    format_version: int = Field(
        FORMAT_VERSION,
        description="Version of the configuration format",
        examples=[1],
    )
    algorithm: str = Field(
        description="Registry name of the algorithm",
        examples=["oscillator", "replicator_2"],
    )
    seed: Optional[int] = Field(
        None,
        ge=0,
        lt=2 ** 64,
        description="Root seed; AMOEBA_SIM_SEED is used when missing",
        examples=[0, 1234],
    )
    rounds: int = Field(
        0,
        ge=0,
        description="Number of synchronous rounds to run",
        examples=[0, 100],
    )
    particles: List[ParticleModel] = Field(default_factory=list)
    policy: PolicyModel = Field(default_factory=PolicyModel)
    scripts: Optional[Dict[str, str]] = Field(
        None,
        description="Action programs of the script algorithm, by name",
        examples=[{"mover": "TEC", "stay": "N"}],
    )

    def system(self) -> SystemConfig:
        return SystemConfig.from_specs(p.spec() for p in self.particles)


class TraceHeader(FileModel):

    format_version: int = FORMAT_VERSION
    simulator_version: str
    algorithm: str
    seed: int
    rounds: int
    policy: PolicyModel
    deviations: List[str] = Field(
        default_factory=list,
        description="Documented departures from the model's literal rules",
        examples=[["kill-freed-expansion"]],
    )
    scripts: Optional[Dict[str, str]] = None


class EventModel(FileModel):

    id: int
    action: Action
    result: Outcome


class TraceRecord(FileModel):

    round: int = Field(ge=0)
    particles: List[TraceParticleModel]
    events: List[EventModel] = Field(default_factory=list)
    connected: bool

    @staticmethod
    def from_round(round: int, system: SystemConfig, report=None) -> "TraceRecord":
        events = []
        connected = is_connected(system) if report is None else report.connected_after
        if report is not None:
            events = [EventModel(id=pid, action=action, result=outcome)
                      for pid, (action, outcome) in sorted(report.outcomes.items())]

        return TraceRecord(round=round,
                           particles=[TraceParticleModel.from_particle(p) for p in system],
                           events=events,
                           connected=connected)

    def system(self, next_id: Optional[int] = None) -> SystemConfig:
        return SystemConfig([p.to_particle() for p in self.particles], next_id=next_id)
