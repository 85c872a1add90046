# encoding: utf-8

import json
import sys
from typing import IO, List, Tuple

import yaml
from pydantic import ValidationError

from amoeba_sim.errors import ParseError
from amoeba_sim.models import RunConfig, TraceHeader, TraceRecord

DEFAULT_FORMAT = "yaml"

FORMAT_READER = {
    "yaml": yaml.safe_load,
    "json": json.load,
}

FORMAT_WRITER = {
    "yaml": lambda data: yaml.safe_dump(data, sort_keys=False),
    "json": lambda data: json.dumps(data, indent=2) + "\n",
}


def format_for(filename: str) -> str:
    return "json" if str(filename).endswith(".json") else DEFAULT_FORMAT


def _syntax_error(source: str, error: Exception) -> ParseError:
    mark = getattr(error, "problem_mark", None)
    if mark is not None:
        return ParseError(source, getattr(error, "problem", None) or str(error),
                          line=mark.line + 1)
    if isinstance(error, json.JSONDecodeError):
        return ParseError(source, error.msg, line=error.lineno)
    return ParseError(source, str(error))


def _validation_error(source: str, error: ValidationError) -> ParseError:
    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"])
    return ParseError(source, first["msg"], field=field or None)


def read_config(stream=sys.stdin, format=DEFAULT_FORMAT, source="<stdin>") -> RunConfig:
    reader = FORMAT_READER.get(format, FORMAT_READER[DEFAULT_FORMAT])
    try:
        config_dict = reader(stream)
    except (yaml.YAMLError, json.JSONDecodeError) as error:
        raise _syntax_error(source, error) from error

    if not isinstance(config_dict, dict):
        raise ParseError(source, "a run configuration must be a mapping", line=1)

    try:
        return RunConfig.model_validate(config_dict)
    except ValidationError as error:
        raise _validation_error(source, error) from error


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as config_file:
        return read_config(config_file, format=format_for(path), source=str(path))


def emit_config(config: RunConfig, format=DEFAULT_FORMAT) -> str:
    writer = FORMAT_WRITER.get(format, FORMAT_WRITER[DEFAULT_FORMAT])
    return writer(config.model_dump(mode="json", exclude_none=True))


class TraceWriter:
    """
    Line-delimited JSON trace: one header line, then one record per
    committed round starting with round 0. Every line is flushed as it is
    written.
    """

    def __init__(self, stream: IO[str]):
        self._stream = stream
        self.records_written = 0

    def _write(self, model) -> None:
        self._stream.write(model.model_dump_json())
        self._stream.write("\n")
        self._stream.flush()

    def write_header(self, header: TraceHeader) -> None:
        self._write(header)

    def write_record(self, record: TraceRecord) -> None:
        self._write(record)
        self.records_written += 1


def write_trace(stream: IO[str], header: TraceHeader, records) -> int:
    writer = TraceWriter(stream)
    writer.write_header(header)
    for record in records:
        writer.write_record(record)
    return writer.records_written


def read_trace(stream: IO[str], source="<trace>") -> Tuple[TraceHeader, List[TraceRecord]]:
    header = None
    records = []
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            if header is None:
                header = TraceHeader.model_validate_json(line)
            else:
                records.append(TraceRecord.model_validate_json(line))
        except ValidationError as error:
            first = _validation_error(source, error)
            raise ParseError(source, first.message, line=lineno,
                             field=first.field) from error

    if header is None:
        raise ParseError(source, "empty trace")
    return header, records


def load_trace(path) -> Tuple[TraceHeader, List[TraceRecord]]:
    with open(path, "r", encoding="utf-8") as trace_file:
        return read_trace(trace_file, source=str(path))
