"""Sparse binary feature space over the object universe.

Each event becomes an indicator vector: one dimension per object in the
universe, set where the event references that object. Dimensions follow the
lexicographic order of object identifiers, so the encoding is independent of
event order and of the universe's set-iteration order. Timestamps and type
ids stay out of the feature space unless ``include_type_id`` is set, which
appends one indicator dimension per distinct type id (off by default; kept
for experimentation).

Vectors are stored CSR-style: ``indices[indptr[i]:indptr[i+1]]`` holds the
sorted dimension indices set for event i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .events import Dataset

__all__ = ["EncodedDataset", "encode", "jaccard_distance"]


@dataclass(frozen=True)
class EncodedDataset:
    """Sparse binary vectors plus the object-to-dimension bijection."""

    indptr: np.ndarray
    indices: np.ndarray
    n_dims: int
    index_map: dict[str, int]
    type_index_map: dict[int, int] | None = None

    @property
    def n_events(self) -> int:
        return len(self.indptr) - 1

    def vector(self, row: int) -> np.ndarray:
        """Sorted dimension indices set for one event."""
        return self.indices[self.indptr[row] : self.indptr[row + 1]]

    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def decode_objects(self, row: int) -> frozenset[str]:
        """Object ids for the set object dimensions of one event."""
        n_objects = len(self.index_map)
        inverse = _inverse_map(self.index_map)
        return frozenset(inverse[d] for d in self.vector(row) if d < n_objects)


def _inverse_map(index_map: dict[str, int]) -> dict[int, str]:
    return {v: k for k, v in index_map.items()}


def encode(dataset: Dataset, include_type_id: bool = False) -> EncodedDataset:
    """Encode a dataset as sparse binary indicator vectors."""
    universe = sorted(dataset.object_universe)
    index_map = {obj: i for i, obj in enumerate(universe)}
    n_dims = len(universe)

    type_index_map = None
    if include_type_id:
        type_ids = sorted({e.type_id for e in dataset.events})
        type_index_map = {t: n_dims + i for i, t in enumerate(type_ids)}
        n_dims += len(type_ids)

    indptr = np.zeros(len(dataset.events) + 1, dtype=np.int64)
    chunks = []
    for i, event in enumerate(dataset.events):
        dims = [index_map[obj] for obj in event.objects]
        if type_index_map is not None:
            dims.append(type_index_map[event.type_id])
        dims.sort()
        chunks.append(np.asarray(dims, dtype=np.int32))
        indptr[i + 1] = indptr[i] + len(dims)
    indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int32)
    return EncodedDataset(
        indptr=indptr,
        indices=indices,
        n_dims=n_dims,
        index_map=index_map,
        type_index_map=type_index_map,
    )


def jaccard_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Jaccard distance between two indicator vectors (sorted index arrays).

    1 - |shared| / |union|; two empty vectors are at distance 0.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    shared = int(np.intersect1d(a, b, assume_unique=True).size)
    union = int(a.size) + int(b.size) - shared
    if union == 0:
        return 0.0
    return 1.0 - shared / union
