"""Dataset serialization and import of external object-centric logs.

File format (text, UTF-8, LF line endings):

* line 1: a JSON header ``{"format_version": 1, "params": {...} or null,
  "object_universe_size": U, "event_count": N}``;
* then exactly ``event_count`` event lines, tab-separated:
  ``index <TAB> timestamp_ms <TAB> type_id <TAB> obj1,obj2,... [<TAB> label]``.

Object lists are comma-joined in lexicographic order, so identical datasets
always serialize to identical bytes. The label column carries ground truth
(-1 for noise); files written without labels read back with absent truth.

The object universe is not spelled out per line. When ``params`` is present
the universe is ``generate_objects(num_unique_objects)``; otherwise it is the
union of all objects observed in the events, plus an optional
``extra_objects`` header field for universe members no event references.
Either way the round trip is exact.
"""

from __future__ import annotations

import dataclasses
import json
import os
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    DatasetFormatError,
    InvalidParameterError,
    UnsupportedVersionError,
)
from .events import Dataset, Event, GroundTruth, ObjectId
from .generator import GenerationParams, generate_objects

__all__ = [
    "FORMAT_VERSION",
    "FieldMapping",
    "ImportSkipWarning",
    "write_dataset",
    "read_dataset",
    "read_header",
    "import_external",
]

FORMAT_VERSION = 1

# Characters with structural meaning in event lines; object ids containing
# them cannot be serialized unambiguously.
_RESERVED = ("\t", ",", "\n", "\r")

_PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(GenerationParams))


class ImportSkipWarning(UserWarning):
    """A record in an external log could not be imported and was skipped."""


def _check_serializable(objects) -> None:
    for obj in objects:
        if any(ch in obj for ch in _RESERVED):
            raise DatasetFormatError(
                f"object id {obj!r} contains a reserved character "
                "(tab, comma, or newline) and cannot be serialized"
            )


def _header_for(dataset: Dataset, params: GenerationParams | None) -> dict:
    header: dict = {"format_version": FORMAT_VERSION}
    if params is not None:
        expected = frozenset(generate_objects(params.num_unique_objects))
        if dataset.object_universe != expected:
            raise InvalidParameterError(
                "dataset universe does not match the generation parameters; "
                "write without params to serialize it as an external log"
            )
        header["params"] = dataclasses.asdict(params)
    else:
        header["params"] = None
        observed: set[ObjectId] = set()
        for event in dataset.events:
            observed |= event.objects
        extra = dataset.object_universe - observed
        if extra:
            header["extra_objects"] = sorted(extra)
    header["object_universe_size"] = len(dataset.object_universe)
    header["event_count"] = len(dataset)
    return header


def _serialize(
    dataset: Dataset,
    truth: GroundTruth | None,
    params: GenerationParams | None,
    strip_labels: bool,
) -> str:
    if truth is not None and len(truth) != len(dataset):
        raise InvalidParameterError(
            f"ground truth has {len(truth)} labels for {len(dataset)} events"
        )
    _check_serializable(dataset.object_universe)
    labels = None if strip_labels or truth is None else truth.labels
    lines = [json.dumps(_header_for(dataset, params), separators=(",", ":"))]
    for i, event in enumerate(dataset.events):
        fields = [
            str(i),
            str(event.timestamp_ms),
            str(event.type_id),
            ",".join(sorted(event.objects)),
        ]
        if labels is not None:
            fields.append(str(labels[i]))
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def write_dataset(
    dataset: Dataset,
    truth: GroundTruth | None,
    destination: str | Path,
    *,
    params: GenerationParams | None = None,
    strip_labels: bool = False,
) -> Path:
    """Write a dataset (and its ground truth, unless stripped) to a file.

    ``params`` embeds the generation parameters in the header so the object
    universe can be reconstructed exactly; leave it None for imported or
    hand-built datasets. The write is atomic: content goes to a temporary
    file in the same directory which is renamed over the destination, so a
    failure never leaves a partial file behind.
    """
    destination = Path(destination)
    content = _serialize(dataset, truth, params, strip_labels)
    tmp = destination.with_name(destination.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        os.replace(tmp, destination)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return destination


def _parse_header(line: str) -> dict:
    try:
        header = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"header is not valid JSON: {exc}", line=1) from exc
    if not isinstance(header, dict):
        raise DatasetFormatError("header must be a JSON object", line=1)
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"unsupported format_version {version!r}, expected {FORMAT_VERSION}",
            line=1,
        )
    for key in ("params", "object_universe_size", "event_count"):
        if key not in header:
            raise DatasetFormatError(f"header is missing {key!r}", line=1)
    for key in ("object_universe_size", "event_count"):
        value = header[key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise DatasetFormatError(
                f"header {key!r} must be a non-negative integer, got {value!r}",
                line=1,
            )
    return header


def _parse_params(raw) -> GenerationParams:
    if not isinstance(raw, dict) or set(raw) != set(_PARAM_FIELDS):
        raise DatasetFormatError(
            "header 'params' must contain exactly the generation parameter fields",
            line=1,
        )
    try:
        return GenerationParams(**raw)
    except InvalidParameterError as exc:
        raise DatasetFormatError(f"invalid generation params: {exc}", line=1) from exc


def _parse_int(text: str, what: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise DatasetFormatError(f"{what} {text!r} is not an integer", line=lineno) from None


def _parse_event_line(line: str, index: int, lineno: int, want_label: bool | None):
    fields = line.split("\t")
    if len(fields) not in (4, 5):
        raise DatasetFormatError(
            f"expected 4 or 5 tab-separated fields, found {len(fields)}", line=lineno
        )
    has_label = len(fields) == 5
    if want_label is not None and has_label != want_label:
        raise DatasetFormatError(
            "label column must be present on every event line or on none",
            line=lineno,
        )
    got_index = _parse_int(fields[0], "event index", lineno)
    if got_index != index:
        raise DatasetFormatError(
            f"event index {got_index}, expected {index}", line=lineno
        )
    timestamp = _parse_int(fields[1], "timestamp", lineno)
    type_id = _parse_int(fields[2], "type id", lineno)
    names = fields[3].split(",") if fields[3] else []
    if len(set(names)) != len(names):
        dup = sorted(n for n in set(names) if names.count(n) > 1)[0]
        raise DatasetFormatError(
            f"object {dup!r} appears twice in one event", line=lineno
        )
    try:
        event = Event(timestamp_ms=timestamp, type_id=type_id, objects=frozenset(names))
    except InvalidParameterError as exc:
        raise DatasetFormatError(str(exc), line=lineno) from exc
    label = _parse_int(fields[4], "label", lineno) if has_label else None
    return event, label


def read_header(source: str | Path) -> dict:
    """Read and validate just the header line of a dataset file.

    Returns the raw header dict; ``header["params"]`` is the generation
    parameter dict for generated datasets and None for imported ones.
    """
    with open(source, encoding="utf-8") as fh:
        first = fh.readline()
    if not first:
        raise DatasetFormatError("file is empty")
    return _parse_header(first.rstrip("\n"))


def read_dataset(source: str | Path) -> tuple[Dataset, GroundTruth | None]:
    """Read a dataset file back into (Dataset, GroundTruth or None).

    Exact inverse of :func:`write_dataset`. Raises DatasetFormatError (with
    the offending line number) on malformed content and
    UnsupportedVersionError on a format_version mismatch.
    """
    source = Path(source)
    text = source.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise DatasetFormatError("file is empty")
    header = _parse_header(lines[0])
    expected = header["event_count"]
    found = len(lines) - 1
    if found != expected:
        raise DatasetFormatError(
            f"header declares {expected} event lines, found {found}"
        )

    events: list[Event] = []
    labels: list[int] = []
    want_label: bool | None = None
    for i in range(expected):
        event, label = _parse_event_line(lines[i + 1], i, i + 2, want_label)
        want_label = label is not None
        events.append(event)
        if label is not None:
            labels.append(label)

    params = header["params"]
    if params is not None:
        universe = frozenset(generate_objects(_parse_params(params).num_unique_objects))
    else:
        universe = frozenset().union(*(e.objects for e in events)) if events else frozenset()
        extra = header.get("extra_objects", [])
        if not isinstance(extra, list) or any(not isinstance(o, str) for o in extra):
            raise DatasetFormatError("header 'extra_objects' must be a list of strings", line=1)
        universe |= frozenset(extra)
    if len(universe) != header["object_universe_size"]:
        raise DatasetFormatError(
            f"header declares {header['object_universe_size']} universe objects, "
            f"reconstructed {len(universe)}"
        )

    try:
        dataset = Dataset(events=tuple(events), object_universe=universe)
        truth = GroundTruth(labels=tuple(labels)) if want_label else None
    except InvalidParameterError as exc:
        raise DatasetFormatError(str(exc)) from exc
    return dataset, truth


@dataclass(frozen=True)
class FieldMapping:
    """Which record fields of an external log carry what.

    ``timestamp_field`` names the event time, ``object_fields`` the fields
    whose (stringified) values become the event's objects, and the optional
    ``type_field`` the event type. Loadable from a small JSON config file:
    ``{"timestamp": "ts", "objects": ["src", "dst"], "type": "kind"}``.
    """

    timestamp_field: str
    object_fields: tuple[str, ...]
    type_field: str | None = None

    def __post_init__(self):
        if not self.timestamp_field or not isinstance(self.timestamp_field, str):
            raise InvalidParameterError("mapping needs a timestamp field name")
        fields = tuple(self.object_fields)
        if not fields or any(not isinstance(f, str) or not f for f in fields):
            raise InvalidParameterError("mapping needs at least one object field name")
        if len(set(fields)) != len(fields):
            raise InvalidParameterError("mapping object fields must be distinct")
        if self.type_field is not None and (
            not isinstance(self.type_field, str) or not self.type_field
        ):
            raise InvalidParameterError("mapping type field must be a non-empty name")
        object.__setattr__(self, "object_fields", fields)

    @classmethod
    def from_dict(cls, raw: dict) -> "FieldMapping":
        unknown = set(raw) - {"timestamp", "objects", "type"}
        if unknown:
            raise InvalidParameterError(
                f"unknown mapping keys: {', '.join(sorted(unknown))}"
            )
        if "timestamp" not in raw or "objects" not in raw:
            raise InvalidParameterError("mapping requires 'timestamp' and 'objects' keys")
        objects = raw["objects"]
        if not isinstance(objects, list):
            raise InvalidParameterError("mapping 'objects' must be a list of field names")
        return cls(
            timestamp_field=raw["timestamp"],
            object_fields=tuple(objects),
            type_field=raw.get("type"),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "FieldMapping":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InvalidParameterError(f"mapping file is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise InvalidParameterError("mapping file must hold a JSON object")
        return cls.from_dict(raw)


def _parse_timestamp(value) -> int:
    """Epoch milliseconds from an int/float epoch or an ISO-8601 string."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return int(round(value))
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
        parsed = datetime.fromisoformat(value)
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        return int(round(parsed.timestamp() * 1000))
    raise ValueError(f"cannot interpret {value!r} as a timestamp")


def _skip(lineno: int, reason: str, skipped: list[str]) -> None:
    message = f"record {lineno}: {reason}"
    skipped.append(message)
    warnings.warn(message, ImportSkipWarning, stacklevel=3)


def import_external(source: str | Path, mapping) -> Dataset:
    """Import a line-delimited JSON log as a Dataset.

    ``mapping`` may be a FieldMapping, a dict, or a path to a JSON mapping
    file. Each record becomes one event whose object set is the stringified
    values of the mapped object fields; the universe is the union of all
    observed objects. Records missing a mapped field, or mapping to an empty
    object set, are skipped with an ImportSkipWarning; importing nothing at
    all is an error.

    Type ids: if every record's type value is an integer it is used as-is,
    otherwise distinct values get ids 1..K in sorted string order. Without a
    type field all events get type id 0.
    """
    if isinstance(mapping, FieldMapping):
        pass
    elif isinstance(mapping, dict):
        mapping = FieldMapping.from_dict(mapping)
    else:
        mapping = FieldMapping.from_file(mapping)

    source = Path(source)
    skipped: list[str] = []
    rows: list[tuple[int, frozenset[ObjectId], object]] = []
    with open(source, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                _skip(lineno, f"not valid JSON ({exc})", skipped)
                continue
            if not isinstance(record, dict):
                _skip(lineno, "record is not a JSON object", skipped)
                continue
            if mapping.timestamp_field not in record:
                _skip(lineno, f"missing field {mapping.timestamp_field!r}", skipped)
                continue
            try:
                timestamp = _parse_timestamp(record[mapping.timestamp_field])
            except ValueError as exc:
                _skip(lineno, f"bad timestamp: {exc}", skipped)
                continue
            type_value: object = 0
            if mapping.type_field is not None:
                if mapping.type_field not in record:
                    _skip(lineno, f"missing field {mapping.type_field!r}", skipped)
                    continue
                type_value = record[mapping.type_field]
            missing = [f for f in mapping.object_fields if f not in record]
            if missing:
                _skip(lineno, f"missing field {missing[0]!r}", skipped)
                continue
            objects = frozenset(
                str(record[f])
                for f in mapping.object_fields
                if record[f] is not None and str(record[f]) != ""
            )
            if not objects:
                _skip(lineno, "no object values", skipped)
                continue
            rows.append((timestamp, objects, type_value))

    if skipped:
        warnings.warn(
            f"skipped {len(skipped)} of {len(skipped) + len(rows)} records",
            ImportSkipWarning,
            stacklevel=2,
        )
    if not rows:
        raise DatasetFormatError(f"no importable records in {source}")

    type_values = [row[2] for row in rows]
    if all(isinstance(v, int) and not isinstance(v, bool) for v in type_values):
        type_ids = type_values
    else:
        codebook = {v: i for i, v in enumerate(sorted({str(v) for v in type_values}), start=1)}
        type_ids = [codebook[str(v)] for v in type_values]

    events = tuple(
        Event(timestamp_ms=ts, type_id=tid, objects=objs)
        for (ts, objs, _), tid in zip(rows, type_ids)
    )
    universe = frozenset().union(*(e.objects for e in events))
    return Dataset(events=events, object_universe=universe)
