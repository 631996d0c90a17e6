"""Exception types shared across the package.

Everything derives from :class:`EntcutError`, which the CLI maps to
exit code 2 (input/validation error).
"""


class EntcutError(ValueError):
    """Base class for all entcut validation and capacity errors."""


class SizeExceeded(EntcutError):
    """Lattice or dense materialization larger than the configured cap."""


class ZeroDim(EntcutError):
    """Lattice with a zero-length side."""


class EmptySide(EntcutError):
    """Bipartition with an empty A or B side."""


class EmptySet(EntcutError):
    """Label-1 image set is empty."""


class GeometryMismatch(EntcutError):
    """Two operands defined on different lattices."""


class DenseCapExceeded(EntcutError):
    """Reduced density matrix would exceed the dense-path cap."""


class GramCapExceeded(EntcutError):
    """Gram matrix would exceed the sparse-path eigensolve cap."""


class BadSpectrum(EntcutError):
    """Schmidt spectrum does not sum to one within tolerance."""


class CountExceeded(EntcutError):
    """Requested more distinct images than the lattice holds."""


class TooFewCuts(EntcutError):
    """Cut family produced no cuts to scan."""


class CutSpecError(EntcutError):
    """Unparseable cut specification string."""


class TaskFileError(EntcutError):
    """Malformed task file (bad schema, duplicate or out-of-range images)."""
