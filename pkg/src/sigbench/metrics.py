"""Pair-counting cluster agreement metrics: Rand index and adjusted Rand index.

All pair counts use exact integer arithmetic (Python integers are unbounded,
so the O(n^2)-sized counts never overflow or round). The noise label -1 is by
default treated as an ordinary label value, i.e. all noise forms one group;
pass ``noise_as_cluster=False`` to treat every noise point as its own
singleton group instead.
"""

from __future__ import annotations

import operator
from collections import Counter
from dataclasses import dataclass
from math import comb

from .errors import InvalidParameterError, UndefinedMetricError
from .events import NOISE_LABEL, GroundTruth

__all__ = ["PairCounts", "pair_counts", "rand_index", "adjusted_rand_index"]


@dataclass(frozen=True)
class PairCounts:
    """Event-pair confusion counts between two labelings.

    tp: co-grouped in both; fn: co-grouped in truth only;
    fp: co-grouped in prediction only; tn: co-grouped in neither.
    """

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def _as_labels(labels) -> list[int]:
    if isinstance(labels, GroundTruth):
        return list(labels.labels)
    out = []
    for v in labels:
        try:
            out.append(operator.index(v))
        except TypeError:
            raise InvalidParameterError(f"labels must be integers, got {v!r}") from None
    return out


def _expand_noise(labels: list[int]) -> list[int]:
    """Replace each noise label with a fresh singleton label."""
    top = max(labels, default=0)
    out = []
    for v in labels:
        if v == NOISE_LABEL:
            top += 1
            out.append(top)
        else:
            out.append(v)
    return out


def _contingency(truth, pred, noise_as_cluster):
    a = _as_labels(truth)
    b = _as_labels(pred)
    if len(a) != len(b):
        raise InvalidParameterError(
            f"label sequences differ in length: {len(a)} vs {len(b)}"
        )
    if not noise_as_cluster:
        a = _expand_noise(a)
        b = _expand_noise(b)
    cells = Counter(zip(a, b))
    row_sums = Counter(a)
    col_sums = Counter(b)
    return cells, row_sums, col_sums, len(a)


def pair_counts(truth, pred, noise_as_cluster: bool = True) -> PairCounts:
    """Count event pairs by co-grouping agreement between truth and prediction.

    Computed from the contingency table, not by enumerating the C(n, 2)
    pairs, so it stays exact and fast for large n.
    """
    cells, row_sums, col_sums, n = _contingency(truth, pred, noise_as_cluster)
    tp = sum(comb(v, 2) for v in cells.values())
    fn = sum(comb(v, 2) for v in row_sums.values()) - tp
    fp = sum(comb(v, 2) for v in col_sums.values()) - tp
    tn = comb(n, 2) - tp - fn - fp
    return PairCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def rand_index(counts: PairCounts) -> float:
    """(tp + tn) / all pairs. Undefined for fewer than two events."""
    if counts.total == 0:
        raise UndefinedMetricError("Rand index is undefined for fewer than two events")
    return (counts.tp + counts.tn) / counts.total


def adjusted_rand_index(truth, pred, noise_as_cluster: bool = True) -> float:
    """Chance-corrected Rand index via the contingency-table form.

    When the maximum index equals the expected index (both labelings are
    all-singletons or all-one-group) the ratio is undefined; by convention
    this returns 1.0 when the two partitions are identical and 0.0 otherwise.
    """
    cells, row_sums, col_sums, n = _contingency(truth, pred, noise_as_cluster)
    if n < 2:
        raise UndefinedMetricError("adjusted Rand index is undefined for fewer than two events")
    index = sum(comb(v, 2) for v in cells.values())
    a = sum(comb(v, 2) for v in row_sums.values())
    b = sum(comb(v, 2) for v in col_sums.values())
    t = comb(n, 2)
    # ARI = (index - a*b/t) / ((a+b)/2 - a*b/t), scaled through by 2t.
    numerator = 2 * (t * index - a * b)
    denominator = t * (a + b) - 2 * a * b
    if denominator == 0:
        return 1.0 if _same_partition(cells) else 0.0
    return numerator / denominator


def _same_partition(cells) -> bool:
    """True when the two labelings induce the same grouping of events."""
    # Identical partitions pair every truth group with exactly one predicted
    # group and vice versa, so each row and column holds a single cell.
    rows = Counter()
    cols = Counter()
    for r, c in cells:
        rows[r] += 1
        cols[c] += 1
    return all(v == 1 for v in rows.values()) and all(v == 1 for v in cols.values())
