"""Numpy implementations of the bit kernels (fallback backend)."""

import numpy as np

_ONE = np.uint64(1)


def gather_bits(words, positions):
    """Extract the bits of ``words`` at ``positions``, packed densely.

    Bit j of each output word is bit ``positions[j]`` of the input word.
    """
    words = np.ascontiguousarray(words, dtype=np.uint64)
    out = np.zeros(words.shape, dtype=np.uint64)
    for j, p in enumerate(positions):
        out |= ((words >> np.uint64(p)) & _ONE) << np.uint64(j)
    return out


def scatter_bits(patterns, positions):
    """Inverse of :func:`gather_bits`: place bit j at ``positions[j]``."""
    patterns = np.ascontiguousarray(patterns, dtype=np.uint64)
    out = np.zeros(patterns.shape, dtype=np.uint64)
    for j, p in enumerate(positions):
        out |= ((patterns >> np.uint64(j)) & _ONE) << np.uint64(p)
    return out


def popcount(words):
    """Number of set bits per word."""
    words = np.ascontiguousarray(words, dtype=np.uint64)
    return np.bitwise_count(words).astype(np.uint64)


def xor_span(basis):
    """All 2**len(basis) XOR combinations of the basis words.

    Output order: index i combines the basis words selected by the bits
    of i, so the result is deterministic but unsorted.
    """
    out = np.zeros(1, dtype=np.uint64)
    for b in basis:
        out = np.concatenate([out, out ^ np.uint64(b)])
    return out
