# encoding: utf-8

"""
amoeba-sim

Run self-organizing particle systems on the hexagonal grid.

Usage:
  amoeba-sim run [options]
  amoeba-sim validate [options]
  amoeba-sim algorithms
  amoeba-sim replay <trace> [options]
  amoeba-sim (-h | --help)
  amoeba-sim --version

Options:
  -h --help              Show this screen.
  --version              Show the version.
  --config PATH          Run configuration file (YAML, or JSON by extension).
  --rounds N             Number of rounds; overrides the configuration.
  --seed S               Root seed; overrides the configuration and AMOEBA_SIM_SEED.
  --algorithm NAME       Algorithm name; overrides the configuration.
  --trace-out PATH       Write the line-delimited trace to PATH (`-` for stdout).
  --render MODE          none, ascii or svg [default: none].
  --render-every K       Render every K-th round [default: 1].
  --out-dir DIR          Directory for SVG frames [default: .].
  --on-disconnect MODE   halt or warn.
  --conflict MODE        lowest-id or seeded.
  --strict-init          Require contracted particles in the start state.
  -v --verbose           Log every round to stderr.
"""

from __future__ import print_function

import logging
import sys
from collections import Counter
from os import environ, makedirs, path

from docopt import DocoptExit, docopt
from pydantic import ValidationError

from amoeba_sim import __version__
from amoeba_sim.algorithms import available, builtin
from amoeba_sim.engine import (
    DEVIATION_FLAGS,
    ConflictPolicy,
    DisconnectPolicy,
    Outcome,
    RandomnessSource,
    iter_rounds,
    validate_initial,
)
from amoeba_sim.errors import (
    ConfigValidationError,
    DisconnectedError,
    ParseError,
    SimulationError,
    UnknownAlgorithm,
)
from amoeba_sim.geometry import Shape
from amoeba_sim.models import ParticleModel, RunConfig, TraceHeader, TraceRecord
from amoeba_sim.render import render_ascii, render_svg
from amoeba_sim.serialization import TraceWriter, load_config, load_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_DISCONNECTED = 3
EXIT_INTERNAL = 4

SEED_ENV = "AMOEBA_SIM_SEED"
RENDER_MODES = ("none", "ascii", "svg")


class UsageError(Exception):
    pass


def exit_with_error(error, code=EXIT_USAGE):
    sys.stderr.write(f"ERROR: {error}\n")
    return code


def get_file(filename, mode):
    """
    Get a file-like object for a filename and mode.

    If filename is `-` return one of stdin or stdout.
    """
    if filename == '-':
        if mode.startswith('r'):
            return sys.stdin
        elif mode.startswith('w'):
            return sys.stdout
        else:
            raise ValueError('Unknown mode "{}"'.format(mode))
    else:
        return open(filename, mode, encoding='utf-8')


def _int_option(params, name, minimum=0):
    value = params.get(name)
    if value is None:
        return None
    try:
        number = int(value)
    except ValueError:
        raise UsageError(f"{name} expects an integer, got {value!r}")
    if number < minimum:
        raise UsageError(f"{name} must be at least {minimum}")
    return number


def _choice_option(params, name, choices):
    value = params.get(name)
    if value is not None and value not in choices:
        raise UsageError(f"{name} must be one of {', '.join(choices)}")
    return value


def build_run_config(params) -> RunConfig:
    """
    Merge the configuration file with command-line overrides. Flags win
    over the file, the file wins over AMOEBA_SIM_SEED, which wins over
    the defaults.
    """
    if params.get('--config'):
        config = load_config(params['--config'])
    else:
        name = params.get('--algorithm')
        if not name:
            raise UsageError("run needs --config or --algorithm")
        start_state = builtin(name).start_state
        config = RunConfig(algorithm=name,
                           particles=[ParticleModel(state=start_state, shape=Shape.S1,
                                                    head=(0, 0), orientation=0)])

    updates = {}
    if params.get('--algorithm'):
        updates['algorithm'] = params['--algorithm']

    rounds = _int_option(params, '--rounds')
    if rounds is not None:
        updates['rounds'] = rounds

    seed = _int_option(params, '--seed')
    if seed is None and config.seed is None and environ.get(SEED_ENV):
        try:
            seed = int(environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer")
    if seed is not None:
        updates['seed'] = seed

    policy_updates = {}
    conflict = _choice_option(params, '--conflict', [p.value for p in ConflictPolicy])
    if conflict:
        policy_updates['conflict'] = ConflictPolicy(conflict)
    on_disconnect = _choice_option(params, '--on-disconnect',
                                   [p.value for p in DisconnectPolicy])
    if on_disconnect:
        policy_updates['on_disconnect'] = DisconnectPolicy(on_disconnect)
    if params.get('--strict-init'):
        policy_updates['strict_init'] = True
    if policy_updates:
        updates['policy'] = {**config.policy.model_dump(), **policy_updates}

    try:
        return RunConfig.model_validate({**config.model_dump(), **updates})
    except ValidationError as error:
        first = error.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise UsageError(f"{field}: {first['msg']}") from error


def prepare(config: RunConfig):
    try:
        algorithm = builtin(config.algorithm, scripts=config.scripts)
    except ValueError as error:
        raise ParseError("scripts", str(error), field="scripts") from error
    system = config.system()
    validate_initial(system, algorithm, strict=config.policy.strict_init)
    return algorithm, system


class FrameRenderer:
    """
    Writes ASCII frames to `stream` (stdout by default) or SVG frames to
    `out_dir`: round 0, every `every`-th round, and the last round of a run.
    """

    def __init__(self, mode="none", every=1, out_dir=".", stream=None):
        self.mode = mode
        self.stream = stream
        self.every = max(1, every)
        self.out_dir = out_dir
        self.rendered = []
        self._last = None

    def __call__(self, round, system):
        self._last = (round, system)
        if round % self.every == 0:
            self._render(round, system)

    def finish(self):
        if self._last is not None and (not self.rendered or self.rendered[-1] != self._last[0]):
            self._render(*self._last)

    def _render(self, round, system):
        if self.mode == "none":
            return

        if self.mode == "ascii":
            stream = self.stream or sys.stdout
            print(f"round {round}", file=stream)
            print(render_ascii(system), file=stream)
        else:
            makedirs(self.out_dir, exist_ok=True)
            frame_path = path.join(self.out_dir, f"frame_{round:05d}.svg")
            with open(frame_path, "w", encoding="utf-8") as frame_file:
                frame_file.write(render_svg(system, title=f"round {round}"))
            logger.debug("wrote %s", frame_path)
        self.rendered.append(round)


def summarize(reports, final) -> dict:
    applied = Counter()
    failed = Counter()
    for report in reports:
        for action, outcome in report.outcomes.values():
            if outcome is Outcome.APPLIED:
                applied[action.value] += 1
            else:
                failed[outcome.value] += 1

    return {
        "rounds": len(reports),
        "particles": len(final),
        "applied": dict(sorted(applied.items())),
        "failed": dict(sorted(failed.items())),
        "disconnected_rounds": [r.round for r in reports if not r.connected_after],
    }


def print_summary(summary: dict, stream=None) -> None:
    stream = stream or sys.stdout
    applied = ", ".join(f"{k}={v}" for k, v in summary['applied'].items()) or "-"
    failed = ", ".join(f"{k}={v}" for k, v in summary['failed'].items()) or "-"

    print(f"rounds: {summary['rounds']}", file=stream)
    print(f"particles: {summary['particles']}", file=stream)
    print(f"applied: {applied}", file=stream)
    print(f"failed: {failed}", file=stream)
    if summary['disconnected_rounds']:
        print(f"disconnected after rounds: {summary['disconnected_rounds']}", file=stream)


def run_simulation(config: RunConfig, trace_out=None, renderer=None, summary_out=None):
    """
    Run `config`, streaming trace records to `trace_out` and frames to
    `renderer`. Returns the exit code and the summary.
    """
    algorithm, system = prepare(config)
    seed = config.seed or 0
    rng = RandomnessSource(seed)
    policy = config.policy.engine_policy()
    renderer = renderer or FrameRenderer()

    writer = TraceWriter(trace_out) if trace_out is not None else None
    if writer:
        writer.write_header(TraceHeader(simulator_version=__version__,
                                        algorithm=algorithm.name,
                                        seed=seed,
                                        rounds=config.rounds,
                                        policy=config.policy,
                                        deviations=list(DEVIATION_FLAGS),
                                        scripts=config.scripts))
        writer.write_record(TraceRecord.from_round(0, system))
    renderer(0, system)

    reports = []
    final = system
    code = EXIT_OK
    try:
        for final, report in iter_rounds(system, algorithm, rng, policy, config.rounds):
            reports.append(report)
            if writer:
                writer.write_record(TraceRecord.from_round(report.round, final, report))
            renderer(report.round, final)
    except DisconnectedError as error:
        reports.append(error.report)
        final = error.system
        if writer:
            writer.write_record(TraceRecord.from_round(error.report.round, final, error.report))
        renderer(error.report.round, final)
        code = exit_with_error(error, EXIT_DISCONNECTED)
    renderer.finish()

    summary = summarize(reports, final)
    print_summary(summary, summary_out)
    return code, summary


def replay(trace_path, renderer) -> int:
    header, records = load_trace(trace_path)
    logger.info("replaying %d records of %s (seed %d)",
                len(records), header.algorithm, header.seed)
    for record in records:
        renderer(record.round, record.system())
    renderer.finish()

    print(f"{trace_path}: {len(records)} records, algorithm {header.algorithm}, "
          f"seed {header.seed}", file=sys.stderr)
    return EXIT_OK


def run(params):
    render_mode = _choice_option(params, '--render', RENDER_MODES) or "none"
    every = _int_option(params, '--render-every', minimum=1) or 1
    out_dir = params.get('--out-dir') or '.'

    if params.get('run'):
        config = build_run_config(params)
        renderer = FrameRenderer(render_mode, every, out_dir)
        trace_path = params.get('--trace-out')
        if not trace_path:
            code, _ = run_simulation(config, None, renderer)
            return code

        trace_file = get_file(trace_path, 'w')
        summary_out = sys.stderr if trace_file is sys.stdout else sys.stdout
        # stdout carries the trace, frames go with the summary
        renderer.stream = summary_out
        try:
            code, _ = run_simulation(config, trace_file, renderer, summary_out)
        finally:
            if trace_file is not sys.stdout:
                trace_file.close()
        return code

    elif params.get('validate'):
        if not params.get('--config'):
            raise UsageError("validate needs --config")
        config = build_run_config(params)
        _, system = prepare(config)
        print(f"{params['--config']}: ok ({len(system)} particles, "
              f"algorithm {config.algorithm})")
        return EXIT_OK

    elif params.get('algorithms'):
        for name, description in available():
            print("\t".join((name, description)))
        return EXIT_OK

    elif params.get('replay'):
        return replay(params['<trace>'], FrameRenderer(render_mode, every, out_dir))

    else:
        return EXIT_USAGE


def main(argv=None):
    try:
        params = docopt(__doc__, argv=argv, version=__version__)
    except DocoptExit as error:
        return exit_with_error(f"invalid usage\n{error}", EXIT_USAGE)

    logging.basicConfig(
        level=logging.DEBUG if params.get('--verbose') else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s")

    try:
        return run(params)
    except UsageError as error:
        return exit_with_error(error, EXIT_USAGE)
    except (ParseError, UnknownAlgorithm, ConfigValidationError) as error:
        return exit_with_error(error, EXIT_VALIDATION)
    except SimulationError as error:
        return exit_with_error(error, EXIT_INTERNAL)
    except OSError as error:
        return exit_with_error(error, EXIT_USAGE)
