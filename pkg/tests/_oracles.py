"""Independent reference implementations used to validate the package.

Everything here is written the slow, obvious way on purpose: exhaustive pair
enumeration for the metrics, a textbook density-reachability expansion over a
full distance matrix for DBSCAN, and sort-based order statistics. Tests
compare the package's optimized implementations against these.
"""

from __future__ import annotations

from collections import deque

import numpy as np


def pair_counts_oracle(truth, pred, noise_as_cluster=True):
    """(tp, fp, fn, tn) by enumerating every event pair."""
    truth = _expand(list(truth), noise_as_cluster)
    pred = _expand(list(pred), noise_as_cluster)
    n = len(truth)
    tp = fp = fn = tn = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_t = truth[i] == truth[j]
            same_p = pred[i] == pred[j]
            if same_t and same_p:
                tp += 1
            elif same_t:
                fn += 1
            elif same_p:
                fp += 1
            else:
                tn += 1
    return tp, fp, fn, tn


def _expand(labels, noise_as_cluster):
    if noise_as_cluster:
        return labels
    nxt = max(labels, default=0) + 1
    out = []
    for v in labels:
        if v == -1:
            out.append(nxt)
            nxt += 1
        else:
            out.append(v)
    return out


def ri_oracle(truth, pred, noise_as_cluster=True):
    tp, fp, fn, tn = pair_counts_oracle(truth, pred, noise_as_cluster)
    return (tp + tn) / (tp + fp + fn + tn)


def ari_oracle(truth, pred, noise_as_cluster=True):
    """ARI via the pair-count identity 2(tp*tn - fn*fp) / ((tp+fn)(fn+tn) + (tp+fp)(fp+tn)).

    An algebraically different route than the contingency-table form.
    """
    tp, fp, fn, tn = pair_counts_oracle(truth, pred, noise_as_cluster)
    num = 2 * (tp * tn - fn * fp)
    den = (tp + fn) * (fn + tn) + (tp + fp) * (fp + tn)
    if den == 0:
        same = _expand(list(truth), noise_as_cluster)
        other = _expand(list(pred), noise_as_cluster)
        groups_a = {tuple(sorted(i for i, v in enumerate(same) if v == lab)) for lab in set(same)}
        groups_b = {tuple(sorted(i for i, v in enumerate(other) if v == lab)) for lab in set(other)}
        return 1.0 if groups_a == groups_b else 0.0
    return num / den


def distance_matrix(vectors):
    """Full pairwise Jaccard distance matrix from per-event object sets."""
    n = len(vectors)
    sets = [set(v) for v in vectors]
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            union = len(sets[i] | sets[j])
            if union == 0:
                d = 0.0
            else:
                d = 1.0 - len(sets[i] & sets[j]) / union
            out[i, j] = out[j, i] = d
    return out


def naive_dbscan(dist, eps, min_samples):
    """Textbook DBSCAN over a precomputed distance matrix.

    Points are visited in index order; expansion is breadth-first; a border
    point keeps the first cluster that reaches it. Mirrors the documented
    tie-breaking of the package implementation.
    """
    n = dist.shape[0]
    neighbors = [np.flatnonzero(dist[i] <= eps) for i in range(n)]
    core = [len(neighbors[i]) >= min_samples for i in range(n)]
    labels = [None] * n
    cluster = 0
    for start in range(n):
        if labels[start] is not None or not core[start]:
            continue
        labels[start] = cluster
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in neighbors[i]:
                j = int(j)
                if labels[j] is not None:
                    continue
                labels[j] = cluster
                if core[j]:
                    queue.append(j)
        cluster += 1
    return [(-1 if v is None else v) for v in labels]


def connected_components(dist, eps):
    """Union-find components of the eps-threshold graph (min_samples=1 case)."""
    n = dist.shape[0]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] <= eps:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    labels = []
    seen = {}
    for i in range(n):
        root = find(i)
        if root not in seen:
            seen[root] = len(seen)
        labels.append(seen[root])
    return labels


def label_isomorphic(a, b):
    """True when two labelings are identical up to cluster renumbering.

    Noise (-1) must match exactly.
    """
    if len(a) != len(b):
        return False
    fwd, rev = {}, {}
    for x, y in zip(a, b):
        if (x == -1) != (y == -1):
            return False
        if x == -1:
            continue
        if fwd.setdefault(x, y) != y or rev.setdefault(y, x) != x:
            return False
    return True


def median_oracle(values):
    data = sorted(values)
    n = len(data)
    mid = n // 2
    if n % 2:
        return float(data[mid])
    return (data[mid - 1] + data[mid]) / 2.0


def quartiles_oracle(values):
    """Inclusive (type-7 style) quartiles by linear interpolation on sorted data."""
    data = sorted(float(v) for v in values)
    n = len(data)

    def quantile(q):
        pos = (n - 1) * q
        lo = int(pos)
        hi = min(lo + 1, n - 1)
        frac = pos - lo
        return data[lo] * (1 - frac) + data[hi] * frac

    return quantile(0.25), quantile(0.5), quantile(0.75)


def knee_oracle(values):
    """Brute-force maximum-curvature index: farthest below the endpoint chord."""
    n = len(values)
    if n < 3 or values[-1] == values[0]:
        return 0
    best, best_i = -np.inf, 0
    for i in range(n):
        x = i / (n - 1)
        y = (values[i] - values[0]) / (values[-1] - values[0])
        if x - y > best:
            best, best_i = x - y, i
    return best_i
