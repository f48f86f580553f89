"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from sigbench import Dataset, Event, GenerationParams

# The benchmark sweep's parameter axes (the values run_sweep's default grid
# uses). Several tests draw random cells from this space.
GRID = {
    "num_signatures": (10, 20, 30, 40),
    "events_per_signature": (10, 20, 30, 40),
    "objects_per_event": (5, 10, 15),
    "similarity_pct": (20, 40, 60, 80),
    "total_events": (10_000, 20_000, 30_000, 40_000),
    "num_unique_objects": (100, 200, 300, 400),
    "repetitions": (1, 2, 3, 4),
}


def draw_grid_params(rng: random.Random, *, seed: int | None = None) -> GenerationParams:
    """One uniformly random feasible cell of the sweep grid."""
    while True:
        values = {name: rng.choice(axis) for name, axis in GRID.items()}
        values["seed"] = rng.randrange(2**31) if seed is None else seed
        sig = values["num_signatures"] * values["events_per_signature"] * values["repetitions"]
        if sig <= values["total_events"] and values["objects_per_event"] <= values["num_unique_objects"]:
            return GenerationParams(**values)


def random_object_dataset(
    rng: random.Random,
    n_events: int,
    universe_size: int = 30,
    max_objects: int = 6,
) -> Dataset:
    """A dataset of uniformly random small object sets (no planted structure)."""
    universe = [f"object{i}" for i in range(1, universe_size + 1)]
    events = []
    for i in range(n_events):
        size = rng.randint(1, max_objects)
        objs = frozenset(rng.sample(universe, size))
        events.append(Event(timestamp_ms=1_000 + i, type_id=rng.randint(1, 50), objects=objs))
    return Dataset(events=tuple(events), object_universe=frozenset(universe))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


# Verdict lines recorded by the acceptance tests; echoed after the run so
# they survive output capture and land in piped logs.
CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.line(line)
