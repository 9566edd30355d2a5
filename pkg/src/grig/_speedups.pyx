# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled permutation kernel: compose, inverse, and chain sifting.

Hot loops of the stabilizer-chain machinery; grig._kernel falls back to
grig._kernel_py when this module is unavailable.  See that module for the
contract documentation.
"""

import numpy as np

BACKEND = "c"


def compose(a, b, out=None):
    if out is None:
        out = np.empty_like(a)
    _compose(a, b, out)
    return out


cdef void _compose(const int[::1] a, const int[::1] b, int[::1] out):
    cdef Py_ssize_t i, n = b.shape[0]
    for i in range(n):
        out[i] = a[b[i]]


def inverse(a, out=None):
    if out is None:
        out = np.empty_like(a)
    _inverse(a, out)
    return out


cdef void _inverse(const int[::1] a, int[::1] out):
    cdef Py_ssize_t i, n = a.shape[0]
    for i in range(n):
        out[a[i]] = <int> i


def strip(g, slot_leaf, slot_shift, slot_value, pivot_row, pinv, start):
    cdef int rc = _strip(g, slot_leaf, slot_shift, slot_value,
                         pivot_row, pinv, start)
    if rc == -1:
        raise ValueError("permutation is not block-structured")
    return rc


cdef int _strip(int[::1] g, const int[::1] slot_leaf,
                const int[::1] slot_shift, const int[::1] slot_value,
                const int[::1] pivot_row, const int[:, ::1] pinv,
                Py_ssize_t start):
    cdef Py_ssize_t s, i, n = g.shape[0], nslots = slot_leaf.shape[0]
    cdef int x, row
    cdef const int[::1] prow
    for s in range(start, nslots):
        x = g[slot_leaf[s]] >> slot_shift[s]
        if x == slot_value[s]:
            continue
        if x != slot_value[s] + 1:
            return -1
        row = pivot_row[s]
        if row < 0:
            return <int> s
        prow = pinv[row]
        for i in range(n):
            g[i] = prow[g[i]]
    return <int> nslots
