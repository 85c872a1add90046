# encoding: utf-8

"""
Exceptions raised by the simulator.

Everything derives from `SimulationError` so that the CLI can map the whole
family to exit codes in one place.
"""


class SimulationError(Exception):
    pass


class ConfigValidationError(SimulationError):
    """
    The system configuration violates one of the model's invariants
    (cell exclusivity, connectedness, or the strict start condition).
    """


class DuplicateOccupancy(ConfigValidationError):

    def __init__(self, cell, first_id: int, second_id: int):
        self.cell = cell
        self.first_id = first_id
        self.second_id = second_id
        super().__init__(
            f"cell ({cell[0]}, {cell[1]}) is occupied by particles "
            f"{first_id} and {second_id}")


class NotConnected(ConfigValidationError):

    def __init__(self, message="configuration is not connected"):
        super().__init__(message)


class StrictInitViolation(ConfigValidationError):

    def __init__(self, particle_id: int, reason: str):
        self.particle_id = particle_id
        super().__init__(f"particle {particle_id}: {reason}")


class UnknownState(ConfigValidationError):

    def __init__(self, particle_id: int, state: str, algorithm: str):
        self.particle_id = particle_id
        self.state = state
        super().__init__(
            f"particle {particle_id}: state {state!r} is not a state "
            f"of algorithm {algorithm!r}")


class InadmissibleShape(SimulationError):

    def __init__(self, action, shape):
        self.action = action
        self.shape = shape
        super().__init__(f"action {action.name} is not admissible "
                         f"for shape {shape.value}")


class AlgorithmStateError(SimulationError):

    def __init__(self, algorithm: str, particle_id: int, state):
        self.particle_id = particle_id
        self.state = state
        super().__init__(
            f"algorithm {algorithm!r} returned state {state!r} for particle "
            f"{particle_id}, which is outside its declared state set")


class UnknownAlgorithm(SimulationError):

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown algorithm {name!r}")


class InternalExclusivityViolation(SimulationError):
    """
    Two particles ended a committed round on the same cell. Conflict
    resolution must make this impossible, so seeing it means an engine bug.
    """


class DisconnectedError(SimulationError):

    def __init__(self, report, system):
        self.report = report
        self.system = system
        super().__init__(
            f"configuration became disconnected in round {report.round}")


class ParseError(SimulationError):

    def __init__(self, source: str, message: str, line=None, field=None):
        self.source = source
        self.line = line
        self.field = field
        self.message = message

        location = source
        if line is not None:
            location += f", line {line}"
        if field:
            location += f", field {field}"
        super().__init__(f"{location}: {message}")
