"""Object-centric event model.

An event is a timestamp, a numeric type id, and a set of object identifiers.
A dataset is an ordered sequence of events plus the universe of objects any
event may reference. Ground truth assigns each event either a signature label
(0..S-1) or -1 for noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidParameterError

__all__ = ["ObjectId", "Event", "Dataset", "GroundTruth", "NOISE_LABEL", "event_overlap"]

ObjectId = str

NOISE_LABEL = -1


@dataclass(frozen=True)
class Event:
    """One event: when it happened, what kind it is, which objects it touches."""

    timestamp_ms: int
    type_id: int
    objects: frozenset[ObjectId]

    def __post_init__(self):
        if not isinstance(self.timestamp_ms, int) or isinstance(self.timestamp_ms, bool):
            raise InvalidParameterError("timestamp_ms must be an integer (milliseconds)")
        if not isinstance(self.type_id, int) or isinstance(self.type_id, bool):
            raise InvalidParameterError("type_id must be an integer")
        objects = frozenset(self.objects)
        if not objects:
            raise InvalidParameterError("an event must reference at least one object")
        for obj in objects:
            if not isinstance(obj, str) or not obj:
                raise InvalidParameterError("object ids must be non-empty strings")
        object.__setattr__(self, "objects", objects)


@dataclass(frozen=True)
class Dataset:
    """An ordered event sequence and the object universe it draws from."""

    events: tuple[Event, ...]
    object_universe: frozenset[ObjectId]

    def __post_init__(self):
        events = tuple(self.events)
        universe = frozenset(self.object_universe)
        for i, event in enumerate(events):
            if not event.objects <= universe:
                missing = sorted(event.objects - universe)[0]
                raise InvalidParameterError(
                    f"event {i} references {missing!r} outside the object universe"
                )
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "object_universe", universe)

    def __len__(self):
        return len(self.events)


@dataclass(frozen=True)
class GroundTruth:
    """Per-event labels: signature index 0..S-1, or -1 for noise.

    The distinct signature labels present must form a contiguous range
    starting at 0.
    """

    labels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        for v in labels:
            if v < NOISE_LABEL:
                raise InvalidParameterError(f"label {v} is below the noise label {NOISE_LABEL}")
        present = sorted({v for v in labels if v != NOISE_LABEL})
        if present and present != list(range(present[-1] + 1)):
            raise InvalidParameterError("signature labels must form a contiguous range 0..S-1")
        object.__setattr__(self, "labels", labels)

    @property
    def signature_count(self) -> int:
        non_noise = [v for v in self.labels if v != NOISE_LABEL]
        return max(non_noise) + 1 if non_noise else 0

    @property
    def noise_count(self) -> int:
        return sum(1 for v in self.labels if v == NOISE_LABEL)

    def __len__(self):
        return len(self.labels)


def event_overlap(a: Event, b: Event) -> tuple[int, int]:
    """Return (shared, union) object counts for two events."""
    shared = len(a.objects & b.objects)
    union = len(a.objects | b.objects)
    return shared, union
