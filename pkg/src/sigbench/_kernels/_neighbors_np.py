"""Pure-numpy neighbor-search kernel (fallback when the compiled one is absent).

Both kernels share one contract. Inputs are two CSR structures over the same
nonzeros: events -> dimensions (``ev_indptr``/``ev_indices``) and the inverted
postings dimensions -> events (``post_indptr``/``post_indices``), plus the
per-event set sizes. Shared-object counts for one query row come from walking
the postings of the row's dimensions; the Jaccard distance to candidate j is
then ``1 - c / (sizes[row] + sizes[j] - c)``. Rows that share nothing sit at
distance 1.0 and never enter a neighborhood for eps < 1 (eps >= 1 is handled
by the caller admitting everything).

``region_query`` fills ``out`` with the indices at distance <= eps (order
unspecified) and returns how many. ``distance_row`` fills a full float64
distance row. ``counts``/``touched`` are caller-owned scratch; ``counts``
must be all zero on entry and is zero again on return.
"""

from __future__ import annotations

import numpy as np


def region_query(ev_indptr, ev_indices, post_indptr, post_indices, sizes,
                 row, eps, counts, touched, out):
    n = sizes.shape[0]
    lo = ev_indptr[row]
    hi = ev_indptr[row + 1]
    if lo == hi:
        # Empty set: distance 0 to other empty sets, 1 to everything else.
        hits = np.flatnonzero(sizes == 0).astype(np.int32)
        out[: hits.size] = hits
        return int(hits.size)
    parts = [post_indices[post_indptr[d] : post_indptr[d + 1]] for d in ev_indices[lo:hi]]
    cnt = np.bincount(np.concatenate(parts), minlength=n)
    cand = np.flatnonzero(cnt)
    c = cnt[cand].astype(np.float64)
    u = (sizes[cand] + sizes[row]).astype(np.float64) - c
    dist = 1.0 - c / u
    hits = cand[dist <= eps].astype(np.int32)
    out[: hits.size] = hits
    return int(hits.size)


def distance_row(ev_indptr, ev_indices, post_indptr, post_indices, sizes,
                 row, counts, touched, out):
    n = sizes.shape[0]
    lo = ev_indptr[row]
    hi = ev_indptr[row + 1]
    if lo == hi:
        out[:] = 1.0
        out[sizes == 0] = 0.0
        return
    parts = [post_indices[post_indptr[d] : post_indptr[d + 1]] for d in ev_indices[lo:hi]]
    cnt = np.bincount(np.concatenate(parts), minlength=n)
    cand = np.flatnonzero(cnt)
    c = cnt[cand].astype(np.float64)
    u = (sizes[cand] + sizes[row]).astype(np.float64) - c
    out[:] = 1.0
    out[cand] = 1.0 - c / u
