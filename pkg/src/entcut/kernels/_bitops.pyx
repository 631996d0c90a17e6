# cython: boundscheck=False, wraparound=False, cdivision=True
"""C implementations of the bit kernels (compiled backend).

Same contracts and output ordering as ``_bitops_py``.
"""

import numpy as np


def gather_bits(words, positions):
    words = np.ascontiguousarray(words, dtype=np.uint64)
    pos = np.ascontiguousarray(positions, dtype=np.int64)
    out = np.zeros(words.shape[0], dtype=np.uint64)
    cdef const unsigned long long[::1] wv = words
    cdef const long long[::1] pv = pos
    cdef unsigned long long[::1] ov = out
    cdef Py_ssize_t i, j, n = wv.shape[0], m = pv.shape[0]
    cdef unsigned long long w, acc
    for i in range(n):
        w = wv[i]
        acc = 0
        for j in range(m):
            acc |= ((w >> pv[j]) & 1ULL) << j
        ov[i] = acc
    return out


def scatter_bits(patterns, positions):
    patterns = np.ascontiguousarray(patterns, dtype=np.uint64)
    pos = np.ascontiguousarray(positions, dtype=np.int64)
    out = np.zeros(patterns.shape[0], dtype=np.uint64)
    cdef const unsigned long long[::1] wv = patterns
    cdef const long long[::1] pv = pos
    cdef unsigned long long[::1] ov = out
    cdef Py_ssize_t i, j, n = wv.shape[0], m = pv.shape[0]
    cdef unsigned long long w, acc
    for i in range(n):
        w = wv[i]
        acc = 0
        for j in range(m):
            acc |= ((w >> j) & 1ULL) << pv[j]
        ov[i] = acc
    return out


cdef inline int _popcount64(unsigned long long x) noexcept nogil:
    x = x - ((x >> 1) & 0x5555555555555555ULL)
    x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0FULL
    return <int>((x * 0x0101010101010101ULL) >> 56)


def popcount(words):
    words = np.ascontiguousarray(words, dtype=np.uint64)
    out = np.zeros(words.shape[0], dtype=np.uint64)
    cdef const unsigned long long[::1] wv = words
    cdef unsigned long long[::1] ov = out
    cdef Py_ssize_t i, n = wv.shape[0]
    for i in range(n):
        ov[i] = <unsigned long long>_popcount64(wv[i])
    return out


def xor_span(basis):
    basis = np.ascontiguousarray(basis, dtype=np.uint64)
    cdef Py_ssize_t d = basis.shape[0]
    if d > 40:
        raise OverflowError("xor_span over more than 2**40 combinations")
    out = np.zeros(1 << d, dtype=np.uint64)
    cdef const unsigned long long[::1] bv = basis
    cdef unsigned long long[::1] ov = out
    cdef unsigned long long i, n = 1ULL << d
    cdef int j
    # out[i] = out[i with lowest bit cleared] ^ basis[index of lowest bit]
    for i in range(1, n):
        j = 0
        while not (i >> j) & 1ULL:
            j += 1
        ov[i] = ov[i & (i - 1)] ^ bv[j]
    return out
