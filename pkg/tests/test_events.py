"""Event model: construction rules, dataset closure, label validation, overlap."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigbench import Dataset, Event, GroundTruth, InvalidParameterError, event_overlap

OBJ = st.text(alphabet="abcdefgh", min_size=1, max_size=4)


def ev(*objects, ts=0, type_id=1):
    return Event(timestamp_ms=ts, type_id=type_id, objects=frozenset(objects))


class TestEvent:
    def test_basic_fields(self):
        e = ev("a", "b", ts=1_600_000_000_000, type_id=7)
        assert e.timestamp_ms == 1_600_000_000_000
        assert e.type_id == 7
        assert e.objects == frozenset({"a", "b"})

    def test_objects_collapse_duplicates(self):
        e = Event(timestamp_ms=0, type_id=1, objects=("a", "a", "b"))
        assert e.objects == frozenset({"a", "b"})

    def test_empty_object_set_rejected(self):
        with pytest.raises(InvalidParameterError):
            Event(timestamp_ms=0, type_id=1, objects=frozenset())

    @pytest.mark.parametrize("stamp", [1.5, "3", None, True])
    def test_non_integer_timestamp_rejected(self, stamp):
        with pytest.raises(InvalidParameterError):
            Event(timestamp_ms=stamp, type_id=1, objects=frozenset({"a"}))

    @pytest.mark.parametrize("type_id", [1.5, "3", None, False])
    def test_non_integer_type_rejected(self, type_id):
        with pytest.raises(InvalidParameterError):
            Event(timestamp_ms=0, type_id=type_id, objects=frozenset({"a"}))

    @pytest.mark.parametrize("bad", ["", 3, None])
    def test_bad_object_ids_rejected(self, bad):
        with pytest.raises(InvalidParameterError):
            Event(timestamp_ms=0, type_id=1, objects=frozenset({"a", bad}))

    def test_frozen(self):
        e = ev("a")
        with pytest.raises(AttributeError):
            e.type_id = 2


class TestDataset:
    def test_preserves_event_order_and_length(self):
        events = (ev("a", ts=3), ev("b", ts=1), ev("a", "b", ts=2))
        ds = Dataset(events=events, object_universe=frozenset({"a", "b"}))
        assert ds.events == events
        assert len(ds) == 3

    def test_event_outside_universe_rejected(self):
        with pytest.raises(InvalidParameterError) as err:
            Dataset(events=(ev("a"), ev("zzz")), object_universe=frozenset({"a"}))
        assert "zzz" in str(err.value)
        assert "event 1" in str(err.value)

    def test_empty_dataset_allowed(self):
        ds = Dataset(events=(), object_universe=frozenset({"a"}))
        assert len(ds) == 0

    def test_universe_may_exceed_observed_objects(self):
        ds = Dataset(events=(ev("a"),), object_universe=frozenset({"a", "b", "c"}))
        assert ds.object_universe == frozenset({"a", "b", "c"})


class TestGroundTruth:
    def test_counts(self):
        gt = GroundTruth(labels=(0, -1, 1, 1, -1, 2))
        assert gt.signature_count == 3
        assert gt.noise_count == 2
        assert len(gt) == 6

    def test_all_noise(self):
        gt = GroundTruth(labels=(-1, -1))
        assert gt.signature_count == 0
        assert gt.noise_count == 2

    def test_empty(self):
        gt = GroundTruth(labels=())
        assert gt.signature_count == 0
        assert gt.noise_count == 0

    def test_gap_in_labels_rejected(self):
        with pytest.raises(InvalidParameterError):
            GroundTruth(labels=(0, 2))

    def test_labels_not_starting_at_zero_rejected(self):
        with pytest.raises(InvalidParameterError):
            GroundTruth(labels=(1, 1))

    def test_label_below_noise_rejected(self):
        with pytest.raises(InvalidParameterError):
            GroundTruth(labels=(0, -2))


class TestEventOverlap:
    def test_worked_example(self):
        a = ev("u1", "h1", "f1", "f2", "p1")
        b = ev("u1", "h1", "f1", "f3", "p2")
        assert event_overlap(a, b) == (3, 7)

    def test_identical(self):
        a = ev("x", "y")
        assert event_overlap(a, a) == (2, 2)

    def test_disjoint(self):
        assert event_overlap(ev("x"), ev("y", "z")) == (0, 3)

    @given(
        st.frozensets(OBJ, min_size=1, max_size=8),
        st.frozensets(OBJ, min_size=1, max_size=8),
    )
    def test_bounds_and_symmetry(self, objs_a, objs_b):
        a = Event(timestamp_ms=0, type_id=1, objects=objs_a)
        b = Event(timestamp_ms=0, type_id=1, objects=objs_b)
        shared, union = event_overlap(a, b)
        assert event_overlap(b, a) == (shared, union)
        assert 0 <= shared <= min(len(objs_a), len(objs_b))
        assert max(len(objs_a), len(objs_b)) <= union <= len(objs_a) + len(objs_b)
        assert union == len(objs_a) + len(objs_b) - shared
