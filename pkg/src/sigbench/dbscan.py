"""Density-based clustering over the Jaccard feature space, from scratch.

Plain DBSCAN: a point is core when at least ``min_samples`` points (itself
included) lie within Jaccard distance ``eps``; clusters grow from core points
by breadth-first expansion; points reachable from a core point but not core
themselves are border points; everything else is noise (-1).

Determinism: points are visited in index order, expansion frontiers are FIFO,
and neighbor lists are consumed in ascending index order, so a border point
reachable from several clusters joins the one whose expansion reaches it
first. No randomness anywhere.

Neighborhoods are computed by exact brute-force candidate counting through an
inverted object index (see ``sigbench._kernels``): O(n^2) worst case, no
spatial index, no approximation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .encoding import EncodedDataset
from .errors import InvalidParameterError
from .events import NOISE_LABEL
from .generator import GenerationParams, shared_object_count

__all__ = ["DbscanConfig", "ClusteringResult", "dbscan", "suggest_config"]

_UNVISITED = -2

# suggest_config: for unrepeated signatures one extra step of radius slack is
# allowed, but only while the expected number of chance admissions per event
# (total_events * chance-overlap tail) stays within this budget ...
CHANCE_ADMISSION_BUDGET = 0.25
# ... and noise is a modest share of the log. Slack costs absorbed noise, and
# that cost scales with the noise share.
NOISE_SHARE_CAP = 0.85


@dataclass(frozen=True)
class DbscanConfig:
    """eps: Jaccard neighborhood radius in (0, 1]; min_samples counts the
    point itself."""

    eps: float
    min_samples: int

    def __post_init__(self):
        if not isinstance(self.eps, (int, float)) or isinstance(self.eps, bool):
            raise InvalidParameterError(f"eps must be a number, got {self.eps!r}")
        if not 0.0 < float(self.eps) <= 1.0:
            raise InvalidParameterError(f"eps must be in (0, 1], got {self.eps}")
        if (
            not isinstance(self.min_samples, int)
            or isinstance(self.min_samples, bool)
            or self.min_samples < 1
        ):
            raise InvalidParameterError(
                f"min_samples must be a positive integer, got {self.min_samples!r}"
            )
        object.__setattr__(self, "eps", float(self.eps))


@dataclass(frozen=True)
class ClusteringResult:
    """Labels aligned with the encoded events: 0..cluster_count-1 or -1."""

    labels: tuple[int, ...]
    cluster_count: int
    noise_count: int


class _NeighborIndex:
    """Inverted-index neighbor search over an encoded dataset."""

    def __init__(self, encoded: EncodedDataset):
        n = encoded.n_events
        self.n = n
        self.ev_indptr = np.ascontiguousarray(encoded.indptr, dtype=np.int64)
        self.ev_indices = np.ascontiguousarray(encoded.indices, dtype=np.int32)
        self.sizes = np.ascontiguousarray(encoded.sizes(), dtype=np.int64)
        # Postings: for each dimension, the ascending list of events that set
        # it. Built with a stable counting sort over the event CSR.
        dim_counts = np.bincount(self.ev_indices, minlength=encoded.n_dims)
        self.post_indptr = np.zeros(encoded.n_dims + 1, dtype=np.int64)
        np.cumsum(dim_counts, out=self.post_indptr[1:])
        rows = np.repeat(np.arange(n, dtype=np.int32), np.diff(self.ev_indptr))
        order = np.argsort(self.ev_indices, kind="stable")
        self.post_indices = np.ascontiguousarray(rows[order])
        self._counts = np.zeros(n, dtype=np.int32)
        self._touched = np.empty(n, dtype=np.int32)
        self._out = np.empty(n, dtype=np.int32)

    def query(self, row: int, eps: float) -> np.ndarray:
        """Indices of all events within eps of ``row``, ascending."""
        if eps >= 1.0:
            # Jaccard distance never exceeds 1, so everything qualifies; the
            # inverted index cannot see zero-overlap pairs and must not be
            # consulted here.
            return np.arange(self.n, dtype=np.int32)
        k = _kernels.region_query(
            self.ev_indptr,
            self.ev_indices,
            self.post_indptr,
            self.post_indices,
            self.sizes,
            row,
            eps,
            self._counts,
            self._touched,
            self._out,
        )
        return np.sort(self._out[:k])

    def distance_row(self, row: int) -> np.ndarray:
        out = np.empty(self.n, dtype=np.float64)
        _kernels.distance_row(
            self.ev_indptr,
            self.ev_indices,
            self.post_indptr,
            self.post_indices,
            self.sizes,
            row,
            self._counts,
            self._touched,
            out,
        )
        return out


def dbscan(encoded: EncodedDataset, config: DbscanConfig) -> ClusteringResult:
    """Cluster an encoded dataset. Deterministic; labels are contiguous."""
    if not isinstance(config, DbscanConfig):
        raise InvalidParameterError("config must be a DbscanConfig")
    n = encoded.n_events
    index = _NeighborIndex(encoded)
    labels = np.full(n, _UNVISITED, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if labels[i] != _UNVISITED:
            continue
        neighbors = index.query(i, config.eps)
        if neighbors.size < config.min_samples:
            labels[i] = NOISE_LABEL
            continue
        labels[i] = cluster
        seeds = deque(int(j) for j in neighbors if j != i)
        while seeds:
            j = seeds.popleft()
            if labels[j] == NOISE_LABEL:
                labels[j] = cluster  # border point, rescued from noise
            if labels[j] != _UNVISITED:
                continue
            labels[j] = cluster
            j_neighbors = index.query(j, config.eps)
            if j_neighbors.size >= config.min_samples:
                seeds.extend(int(q) for q in j_neighbors)
        cluster += 1
    noise = int(np.count_nonzero(labels == NOISE_LABEL))
    return ClusteringResult(
        labels=tuple(int(v) for v in labels),
        cluster_count=cluster,
        noise_count=noise,
    )


def _overlap_tail(universe: int, set_size: int, at_least: int) -> float:
    """P(|A ∩ B| >= at_least) for two independent uniform ``set_size``-subsets
    of a ``universe``-element pool. Exact hypergeometric sum via integers."""
    if at_least <= 0:
        return 1.0
    if at_least > set_size:
        return 0.0
    total = comb(universe, set_size)
    favorable = 0
    for j in range(at_least, set_size + 1):
        if set_size - j > universe - set_size:
            continue
        favorable += comb(set_size, j) * comb(universe - set_size, set_size - j)
    return favorable / total


def _overlap_step(m: int, shared: int) -> float:
    """Jaccard distance between two m-object events sharing exactly
    ``shared`` objects: 1 - shared / (2m - shared)."""
    return 1.0 - shared / (2 * m - shared)


def _knee_index(values: np.ndarray) -> int:
    """Maximum-curvature point of an ascending curve.

    Both axes are scaled to [0, 1]; the knee is the point farthest below the
    chord joining the endpoints (argmax of x - y, smallest index on ties).
    Degenerate flat curves return 0.
    """
    n = len(values)
    if n < 3:
        return 0
    span = float(values[-1] - values[0])
    if span <= 0.0:
        return 0
    x = np.arange(n, dtype=np.float64) / (n - 1)
    y = (np.asarray(values, dtype=np.float64) - float(values[0])) / span
    return int(np.argmax(x - y))


def suggest_config(
    encoded: EncodedDataset,
    params_hint: GenerationParams | None = None,
) -> DbscanConfig:
    """Heuristic eps / min_samples.

    With a generation hint: min_samples = max(2, events_per_signature), so a
    signature's own cohort is enough for core status. Any two events of one
    signature share at least k = shared_object_count(m, similarity) objects,
    putting them within the distance floor 1 - k/(2m - k); eps sits halfway
    between that floor and the next overlap step (k-1 shared), admitting
    every intra-signature pair while requiring chance pairs to reach the same
    overlap. For unrepeated signatures (repetitions == 1) the radius gets one
    extra step of slack, but only while that slack is affordable: the expected
    number of chance admissions per event, total_events * P(chance overlap >=
    k-1), must stay within CHANCE_ADMISSION_BUDGET, and noise may be at most
    NOISE_SHARE_CAP of the log (chance admissions are drawn from the noise
    pool, so their cost scales with its share). Repeated signatures already
    have ample density support and keep the strict radius.

    Without a hint: min_samples = 4 and eps is read off the sorted k-distance
    curve (distance to the min_samples-th nearest point, self included) at
    its maximum-curvature point.
    """
    if params_hint is not None:
        m = params_hint.objects_per_event
        k = shared_object_count(m, params_hint.similarity_pct)
        min_samples = max(2, params_hint.events_per_signature)
        if k <= 0:
            # No guaranteed overlap: signatures are indistinguishable from
            # noise, the radius cannot help.
            return DbscanConfig(eps=1.0, min_samples=min_samples)
        admit = k
        if params_hint.repetitions == 1 and k >= 2:
            # Unrepeated signatures get one step of radius slack, but only
            # when its cost stays low. Slack admits chance overlaps, and the
            # damage they do scales with the noise share of the log, so both
            # must be small.
            chance = _overlap_tail(params_hint.num_unique_objects, m, k - 1)
            noise_share_ok = (
                params_hint.noise_event_count
                <= NOISE_SHARE_CAP * params_hint.total_events
            )
            if (
                noise_share_ok
                and params_hint.total_events * chance <= CHANCE_ADMISSION_BUDGET
            ):
                admit = k - 1
        upper = _overlap_step(m, admit - 1) if admit >= 1 else 1.0
        eps = (_overlap_step(m, admit) + upper) / 2.0
        return DbscanConfig(eps=min(eps, 1.0), min_samples=min_samples)

    min_samples = 4
    n = encoded.n_events
    if n < 2:
        raise InvalidParameterError("cannot suggest a config for fewer than two events")
    index = _NeighborIndex(encoded)
    rank = min(min_samples, n) - 1
    k_distances = np.empty(n, dtype=np.float64)
    for i in range(n):
        row = index.distance_row(i)
        k_distances[i] = np.partition(row, rank)[rank]
    k_distances.sort()
    eps = float(k_distances[_knee_index(k_distances)])
    if eps <= 0.0:
        positive = k_distances[k_distances > 0.0]
        eps = float(positive[0]) if positive.size else 1.0
    return DbscanConfig(eps=min(eps, 1.0), min_samples=min_samples)
