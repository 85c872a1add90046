"""
Run configuration and trace files: loading, emitting, diagnostics
"""

import io
import json

import pytest
import yaml

from helpers import fixture_path, fixtures_for, load_fixture, s1, s2, system_of

from amoeba_sim import __version__
from amoeba_sim.algorithms import builtin
from amoeba_sim.engine import (
    DEVIATION_FLAGS,
    ConflictPolicy,
    DisconnectPolicy,
    RandomnessSource,
    iter_rounds,
)
from amoeba_sim.errors import DuplicateOccupancy, ParseError
from amoeba_sim.geometry import Cell, Shape
from amoeba_sim.models import PolicyModel, RunConfig, TraceHeader, TraceRecord
from amoeba_sim.serialization import (
    emit_config,
    load_config,
    load_trace,
    read_config,
    read_trace,
    write_trace,
)


def trace_text(config: RunConfig) -> str:
    algorithm = builtin(config.algorithm, scripts=config.scripts)
    system = config.system()
    header = TraceHeader(simulator_version=__version__, algorithm=algorithm.name,
                         seed=config.seed or 0, rounds=config.rounds, policy=config.policy,
                         deviations=list(DEVIATION_FLAGS), scripts=config.scripts)
    records = [TraceRecord.from_round(0, system)]
    for after, report in iter_rounds(system, algorithm, RandomnessSource(config.seed or 0),
                                     config.policy.engine_policy(), config.rounds):
        records.append(TraceRecord.from_round(report.round, after, report))

    stream = io.StringIO()
    write_trace(stream, header, records)
    return stream.getvalue()


@pytest.mark.parametrize('fixture', fixtures_for('five_rounds'))
def test_load_golden_fixture(fixture):
    """
    The five-round fixture loads into exactly the hand-written system
    """
    config = load_fixture(fixture)

    assert config.algorithm == "script"
    assert config.seed == 7
    assert config.rounds == 5
    assert config.scripts == {"a": "TECTE", "b": "EDKNN", "s": "NNNNN"}
    assert config.policy == PolicyModel()

    assert config.system() == system_of(s1(0, 0, 0, state="a:0"),
                                        s1(1, 0, 1, state="b:0"),
                                        s1(2, 1, 1, state="s:0"))


def test_load_minimal_config_defaults():
    config = load_fixture("idle_single.yaml")

    assert config.format_version == 1
    assert config.seed is None
    assert config.rounds == 2
    assert config.policy.conflict is ConflictPolicy.LOWEST_ID
    assert config.policy.on_disconnect is DisconnectPolicy.HALT
    assert not config.policy.strict_init
    assert list(config.system()) == [s1(0, 0, 0, state="idle")]


def test_load_expanded_particles_and_policy():
    config = load_fixture("expanded_start.yaml")

    assert config.policy.engine_policy().conflict_policy is ConflictPolicy.SEEDED
    assert config.policy.engine_policy().disconnect_policy is DisconnectPolicy.WARN
    system = config.system()
    assert system.get(0) == s2(0, 2, -1, r=2, state="moving")
    assert system.get(0).tail == (1, 0)


def test_overlapping_particles_are_rejected():
    config = load_fixture("overlapping.yaml")

    with pytest.raises(DuplicateOccupancy) as error:
        config.system()
    assert error.value.cell == (0, 0)


def test_invalid_field_reports_its_path():
    with pytest.raises(ParseError) as error:
        load_fixture("bad_orientation.yaml")

    assert error.value.field == "particles.0.orientation"
    assert "bad_orientation.yaml" in str(error.value)


def test_syntax_error_reports_a_line():
    with pytest.raises(ParseError) as error:
        load_fixture("bad_syntax.yaml")
    assert error.value.line is not None


def test_json_syntax_error_reports_a_line():
    with pytest.raises(ParseError) as error:
        read_config(io.StringIO('{\n  "algorithm": "idle",\n  oops\n}'), format="json")
    assert error.value.line == 3


@pytest.mark.parametrize('document', ['[1, 2]', 'just text'])
def test_config_must_be_a_mapping(document):
    with pytest.raises(ParseError):
        read_config(io.StringIO(document))


def test_unknown_keys_are_rejected():
    with pytest.raises(ParseError) as error:
        read_config(io.StringIO("algorithm: idle\ncolour: red\n"))
    assert error.value.field == "colour"


@pytest.mark.parametrize('fmt', ['yaml', 'json'])
@pytest.mark.parametrize('fixture', ['five_rounds.yaml', 'expanded_start.yaml',
                                     'walker_ring6.yaml', 'kill_middle.yaml'])
def test_emit_then_load_is_stable(fixture, fmt):
    config = load_fixture(fixture)
    emitted = emit_config(config, fmt)

    reloaded = read_config(io.StringIO(emitted), format=fmt)
    assert reloaded == config
    assert emit_config(reloaded, fmt) == emitted


def test_emitted_yaml_is_plain_data():
    emitted = yaml.safe_load(emit_config(load_fixture("expanded_start.yaml")))

    assert emitted["policy"] == {"conflict": "seeded", "on_disconnect": "warn",
                                 "strict_init": False}
    assert emitted["particles"][0] == {"state": "moving", "shape": "s2", "head": [2, -1],
                                       "orientation": 2}
    assert "scripts" not in emitted


def test_load_config_by_extension():
    assert load_config(fixture_path("five_rounds.json")) == \
        load_config(fixture_path("five_rounds.yaml"))


def test_idle_trace_has_one_record_per_round():
    lines = trace_text(load_fixture("idle_single.yaml")).splitlines()

    assert len(lines) == 4
    header = json.loads(lines[0])
    assert header["algorithm"] == "idle"
    assert header["seed"] == 0
    assert header["deviations"] == ["kill-freed-expansion"]
    assert [json.loads(line)["round"] for line in lines[1:]] == [0, 1, 2]


def test_minimal_run_writes_a_single_record():
    config = load_fixture("idle_single.yaml").model_copy(update={"rounds": 0})
    lines = trace_text(config).splitlines()

    assert len(lines) == 2
    assert json.loads(lines[1])["events"] == []


def test_traces_are_byte_identical_for_equal_seeds():
    config = load_fixture("expanded_start.yaml").model_copy(update={"rounds": 30})
    assert trace_text(config) == trace_text(config)

    walker = load_fixture("walker_ring6.yaml").model_copy(update={"rounds": 1000})
    assert trace_text(walker) == trace_text(walker)


def test_random_walker_traces_are_byte_identical():
    config = RunConfig(algorithm="random_walker", seed=123, rounds=1000,
                       particles=[{"state": "wander", "head": (0, 0)}])
    assert trace_text(config) == trace_text(config)


def test_oscillator_trace_final_head():
    config = RunConfig(algorithm="oscillator", rounds=4,
                       particles=[{"state": "moving", "head": (1, 1), "orientation": 2}])
    _, records = read_trace(io.StringIO(trace_text(config)))

    final = records[-1].system()
    assert final.get(0).head == Cell(3, -1)
    assert final.get(0).shape is Shape.S1


def test_read_trace_round_trip(tmp_path):
    path = tmp_path / "trace.jsonl"
    path.write_text(trace_text(load_fixture("five_rounds.yaml")), encoding="utf-8")

    header, records = load_trace(path)
    assert header.algorithm == "script"
    assert header.scripts == {"a": "TECTE", "b": "EDKNN", "s": "NNNNN"}
    assert [r.round for r in records] == [0, 1, 2, 3, 4, 5]
    assert records[2].system().cells() == {(1, 0), (0, 0), (0, 2), (0, 1), (1, 1)}
    assert [e.id for e in records[3].events] == [0, 1, 2, 3]
    assert records[-1].connected


def test_read_trace_diagnostics():
    with pytest.raises(ParseError):
        read_trace(io.StringIO(""))

    good = trace_text(RunConfig(algorithm="oscillator", rounds=1,
                                particles=[{"state": "moving", "head": (0, 0)}]))
    broken = good + '{"round": -1, "particles": [], "connected": true}\n'
    with pytest.raises(ParseError) as error:
        read_trace(io.StringIO(broken))
    assert error.value.line == 4
    assert error.value.field == "round"


def test_trace_record_from_round_without_report():
    system = system_of(s1(0, 0, 0, state="moving"), s1(1, 0, 4, state="moving"))
    record = TraceRecord.from_round(0, system)

    assert not record.connected
    assert record.system() == system
    assert record.system(next_id=10).next_id == 10
