"""Synthetic event-log generation with planted object signatures.

A signature is a set of objects that recur together: every event of signature
``s`` contains the signature's common object set plus event-specific filler
objects. Repetitions re-emit the same signature (same common set) so its
events become denser in the final log. Remaining capacity is filled with
uniform noise events, and the whole log is shuffled.

All randomness flows through one numpy ``Generator`` (PCG64) seeded from
``GenerationParams.seed``, with a fixed draw order:

1. common object set for each signature, in signature order;
2. event-specific objects for every signature event, in
   (signature, repetition, event) order;
3. type ids for all signature events, one batch;
4. object sets for noise events, in order;
5. type ids for all noise events, one batch;
6. one global shuffle permutation.

Equal parameters therefore always produce byte-identical datasets.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .events import Dataset, Event, GroundTruth, NOISE_LABEL, ObjectId

__all__ = [
    "GenerationParams",
    "shared_object_count",
    "generate_objects",
    "generate_signatures",
    "generate_noise",
    "generate_dataset",
    "inject_signatures",
    "TYPE_ID_RANGE",
    "BASE_EPOCH_MS",
    "TIMESTAMP_STEP_MS",
]

# Uniform type-id range for generated events (inclusive bounds).
TYPE_ID_RANGE = (1, 1000)

# Final timestamps are BASE_EPOCH_MS + index * TIMESTAMP_STEP_MS, assigned
# after the shuffle so the log is strictly increasing in time.
BASE_EPOCH_MS = 1_600_000_000_000
TIMESTAMP_STEP_MS = 1000

# Placeholder stamp on events that have not been sequenced yet.
_UNSEQUENCED = 0


@dataclass(frozen=True)
class GenerationParams:
    """The seven generation parameters plus the RNG seed."""

    num_signatures: int
    events_per_signature: int
    objects_per_event: int
    similarity_pct: int
    total_events: int
    num_unique_objects: int
    repetitions: int
    seed: int = 0

    def __post_init__(self):
        for name in (
            "num_signatures",
            "events_per_signature",
            "objects_per_event",
            "total_events",
            "num_unique_objects",
            "repetitions",
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidParameterError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.similarity_pct, int) or not 0 <= self.similarity_pct <= 100:
            raise InvalidParameterError(
                f"similarity_pct must be an integer in [0, 100], got {self.similarity_pct!r}"
            )
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise InvalidParameterError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.objects_per_event > self.num_unique_objects:
            raise InvalidParameterError(
                f"objects_per_event ({self.objects_per_event}) exceeds "
                f"num_unique_objects ({self.num_unique_objects})"
            )
        if self.signature_event_count > self.total_events:
            raise InvalidParameterError(
                f"signatures exceed total events: {self.num_signatures} x "
                f"{self.events_per_signature} x {self.repetitions} = "
                f"{self.signature_event_count} > {self.total_events}"
            )

    @property
    def signature_event_count(self) -> int:
        return self.num_signatures * self.events_per_signature * self.repetitions

    @property
    def noise_event_count(self) -> int:
        return self.total_events - self.signature_event_count

    @property
    def shared_objects(self) -> int:
        return shared_object_count(self.objects_per_event, self.similarity_pct)


def shared_object_count(objects_per_event: int, similarity_pct: int) -> int:
    """Number of common objects per signature: objects_per_event * pct / 100,
    rounded half-up (exact integer arithmetic, no float rounding)."""
    if objects_per_event < 1:
        raise InvalidParameterError("objects_per_event must be positive")
    if not 0 <= similarity_pct <= 100:
        raise InvalidParameterError("similarity_pct must be in [0, 100]")
    return (2 * objects_per_event * similarity_pct + 100) // 200


def generate_objects(count: int) -> list[ObjectId]:
    """The object universe: ["object1", ..., "object<count>"]. Seed-independent."""
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise InvalidParameterError(f"object count must be a positive integer, got {count!r}")
    return [f"object{i}" for i in range(1, count + 1)]


def _signature_events(
    params: GenerationParams,
    pool: list[ObjectId],
    rng: np.random.Generator,
    type_id_range: tuple[int, int],
) -> tuple[list[Event], list[int]]:
    """Signature events in (signature, repetition, event) order with labels."""
    n_pool = len(pool)
    if params.objects_per_event > n_pool:
        raise InvalidParameterError(
            f"objects_per_event ({params.objects_per_event}) exceeds pool size ({n_pool})"
        )
    k = params.shared_objects
    fill = params.objects_per_event - k
    indices = np.arange(n_pool)

    commons: list[np.ndarray] = []
    for _ in range(params.num_signatures):
        common = rng.choice(n_pool, size=k, replace=False) if k else np.empty(0, dtype=np.int64)
        commons.append(common)

    object_sets: list[frozenset[ObjectId]] = []
    labels: list[int] = []
    for s in range(params.num_signatures):
        common = commons[s]
        rest = np.setdiff1d(indices, common)
        base = frozenset(pool[i] for i in common)
        for _ in range(params.repetitions):
            for _ in range(params.events_per_signature):
                if fill:
                    extra = rng.choice(rest, size=fill, replace=False)
                    object_sets.append(base | frozenset(pool[i] for i in extra))
                else:
                    object_sets.append(base)
                labels.append(s)

    low, high = type_id_range
    type_ids = rng.integers(low, high + 1, size=len(object_sets))
    events = [
        Event(timestamp_ms=_UNSEQUENCED, type_id=int(type_ids[i]), objects=object_sets[i])
        for i in range(len(object_sets))
    ]
    return events, labels


def generate_signatures(
    params: GenerationParams,
    objects: list[ObjectId],
    rng: np.random.Generator,
    type_id_range: tuple[int, int] = TYPE_ID_RANGE,
) -> tuple[list[Event], list[int]]:
    """Generate the signature block (pre-shuffle, placeholder timestamps).

    Every event of signature s contains that signature's common object set
    (drawn once and reused across repetitions) plus event-specific objects
    drawn from the rest of the pool.
    """
    return _signature_events(params, list(objects), rng, type_id_range)


def generate_noise(
    count: int,
    objects: list[ObjectId],
    objects_per_event: int,
    rng: np.random.Generator,
    type_id_range: tuple[int, int] = TYPE_ID_RANGE,
) -> list[Event]:
    """``count`` uniform events: objects_per_event objects drawn without
    replacement from the pool, no planted structure."""
    if count < 0:
        raise InvalidParameterError("noise count cannot be negative")
    pool = list(objects)
    if objects_per_event > len(pool):
        raise InvalidParameterError("objects_per_event exceeds pool size")
    object_sets = []
    for _ in range(count):
        chosen = rng.choice(len(pool), size=objects_per_event, replace=False)
        object_sets.append(frozenset(pool[i] for i in chosen))
    low, high = type_id_range
    type_ids = rng.integers(low, high + 1, size=count)
    return [
        Event(timestamp_ms=_UNSEQUENCED, type_id=int(type_ids[i]), objects=object_sets[i])
        for i in range(count)
    ]


def _sequence(events: list[Event]) -> tuple[Event, ...]:
    """Assign strictly increasing timestamps in final order."""
    return tuple(
        dataclasses.replace(event, timestamp_ms=BASE_EPOCH_MS + i * TIMESTAMP_STEP_MS)
        for i, event in enumerate(events)
    )


def generate_dataset(
    params: GenerationParams,
    type_id_range: tuple[int, int] = TYPE_ID_RANGE,
) -> tuple[Dataset, GroundTruth]:
    """Full pipeline: objects, signatures, noise, shuffle, timestamps.

    Deterministic for equal params: see the module docstring for the draw
    order contract.
    """
    objects = generate_objects(params.num_unique_objects)
    rng = np.random.default_rng(params.seed)

    sig_events, labels = _signature_events(params, objects, rng, type_id_range)
    noise_events = generate_noise(
        params.noise_event_count, objects, params.objects_per_event, rng, type_id_range
    )

    combined = sig_events + noise_events
    combined_labels = labels + [NOISE_LABEL] * len(noise_events)

    perm = rng.permutation(len(combined))
    shuffled = [combined[i] for i in perm]
    shuffled_labels = [combined_labels[i] for i in perm]

    dataset = Dataset(events=_sequence(shuffled), object_universe=frozenset(objects))
    return dataset, GroundTruth(labels=tuple(shuffled_labels))


def inject_signatures(
    base: Dataset,
    params: GenerationParams,
    type_id_range: tuple[int, int] = TYPE_ID_RANGE,
) -> tuple[Dataset, GroundTruth]:
    """Plant synthetic signatures into an existing dataset.

    Signature events draw their objects from the base dataset's universe
    (sorted lexicographically to fix the pool order). The injected events are
    interleaved at seeded-uniform positions; base events keep their content
    and relative order and are labelled noise. ``params.total_events`` and
    ``params.num_unique_objects`` are ignored: the base log supplies both.

    An injected event's timestamp is the midpoint of its neighbours' stamps
    (one step outside the range at either end), so base stamps never change.
    """
    pool = sorted(base.object_universe)
    if params.objects_per_event > len(pool):
        raise InvalidParameterError(
            f"objects_per_event ({params.objects_per_event}) exceeds the base "
            f"universe size ({len(pool)})"
        )
    rng = np.random.default_rng(params.seed)
    injected, injected_labels = _signature_events(params, pool, rng, type_id_range)

    n_base = len(base.events)
    n_total = n_base + len(injected)
    slots = np.sort(rng.choice(n_total, size=len(injected), replace=False))

    merged: list[Event | None] = [None] * n_total
    merged_labels = [NOISE_LABEL] * n_total
    for event, label, slot in zip(injected, injected_labels, slots):
        merged[slot] = event
        merged_labels[slot] = label
    base_iter = iter(base.events)
    for i in range(n_total):
        if merged[i] is None:
            merged[i] = next(base_iter)

    slot_set = set(int(s) for s in slots)
    for i in sorted(slot_set):
        prev_t = merged[i - 1].timestamp_ms if i > 0 else None
        nxt = next((j for j in range(i + 1, n_total) if j not in slot_set), None)
        next_t = merged[nxt].timestamp_ms if nxt is not None else None
        if prev_t is None and next_t is None:
            stamp = BASE_EPOCH_MS
        elif prev_t is None:
            stamp = next_t - TIMESTAMP_STEP_MS
        elif next_t is None:
            stamp = prev_t + TIMESTAMP_STEP_MS
        else:
            stamp = (prev_t + next_t) // 2
        merged[i] = dataclasses.replace(merged[i], timestamp_ms=stamp)

    dataset = Dataset(events=tuple(merged), object_universe=base.object_universe)
    return dataset, GroundTruth(labels=tuple(merged_labels))
