"""Bit-manipulation kernels with a compiled core and a numpy fallback.

The compiled extension is preferred when it imported cleanly; otherwise
the numpy implementations are used. Both backends produce identical
output (ordering included), so everything built on top is
backend-agnostic.
"""

from . import _bitops_py

try:
    from . import _bitops as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _bitops_py
    BACKEND = "python"

gather_bits = _impl.gather_bits
scatter_bits = _impl.scatter_bits
popcount = _impl.popcount
xor_span = _impl.xor_span


def available_backends():
    """Importable backend modules keyed by name (for tests/benchmarks)."""
    backends = {"python": _bitops_py}
    if BACKEND == "cython":
        backends["cython"] = _impl
    return backends


__all__ = [
    "BACKEND",
    "available_backends",
    "gather_bits",
    "scatter_bits",
    "popcount",
    "xor_span",
]
