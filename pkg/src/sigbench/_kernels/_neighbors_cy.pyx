# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled neighbor-search kernel.

Same contract as ``_neighbors_np`` (see that module's docstring): inverted-
index shared-object counting, exact Jaccard thresholding. ``counts`` must be
all zero on entry; it is restored to zero before returning so one scratch
array serves every query.
"""

import numpy as np

cimport numpy as cnp


def region_query(const cnp.int64_t[::1] ev_indptr,
                 const cnp.int32_t[::1] ev_indices,
                 const cnp.int64_t[::1] post_indptr,
                 const cnp.int32_t[::1] post_indices,
                 const cnp.int64_t[::1] sizes,
                 Py_ssize_t row,
                 double eps,
                 cnp.int32_t[::1] counts,
                 cnp.int32_t[::1] touched,
                 cnp.int32_t[::1] out):
    cdef Py_ssize_t n = sizes.shape[0]
    cdef Py_ssize_t lo = ev_indptr[row]
    cdef Py_ssize_t hi = ev_indptr[row + 1]
    cdef Py_ssize_t p, q, d, n_touched = 0, n_hits = 0
    cdef cnp.int32_t j
    cdef cnp.int64_t size_row = sizes[row]
    cdef double c, u, dist

    if lo == hi:
        for p in range(n):
            if sizes[p] == 0:
                out[n_hits] = <cnp.int32_t> p
                n_hits += 1
        return n_hits

    with nogil:
        for p in range(lo, hi):
            d = ev_indices[p]
            for q in range(post_indptr[d], post_indptr[d + 1]):
                j = post_indices[q]
                if counts[j] == 0:
                    touched[n_touched] = j
                    n_touched += 1
                counts[j] += 1
        for p in range(n_touched):
            j = touched[p]
            c = <double> counts[j]
            counts[j] = 0
            u = <double> (sizes[j] + size_row) - c
            dist = 1.0 - c / u
            if dist <= eps:
                out[n_hits] = j
                n_hits += 1
    return n_hits


def distance_row(const cnp.int64_t[::1] ev_indptr,
                 const cnp.int32_t[::1] ev_indices,
                 const cnp.int64_t[::1] post_indptr,
                 const cnp.int32_t[::1] post_indices,
                 const cnp.int64_t[::1] sizes,
                 Py_ssize_t row,
                 cnp.int32_t[::1] counts,
                 cnp.int32_t[::1] touched,
                 double[::1] out):
    cdef Py_ssize_t n = sizes.shape[0]
    cdef Py_ssize_t lo = ev_indptr[row]
    cdef Py_ssize_t hi = ev_indptr[row + 1]
    cdef Py_ssize_t p, q, d, n_touched = 0
    cdef cnp.int32_t j
    cdef cnp.int64_t size_row = sizes[row]
    cdef double c, u

    if lo == hi:
        for p in range(n):
            out[p] = 0.0 if sizes[p] == 0 else 1.0
        return

    with nogil:
        for p in range(n):
            out[p] = 1.0
        for p in range(lo, hi):
            d = ev_indices[p]
            for q in range(post_indptr[d], post_indptr[d + 1]):
                j = post_indices[q]
                if counts[j] == 0:
                    touched[n_touched] = j
                    n_touched += 1
                counts[j] += 1
        for p in range(n_touched):
            j = touched[p]
            c = <double> counts[j]
            counts[j] = 0
            u = <double> (sizes[j] + size_row) - c
            out[j] = 1.0 - c / u
