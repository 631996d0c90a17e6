"""Reduced density matrices, Schmidt spectra, and von Neumann entropy.

Three routes to the same spectrum:

* dense      -- materialize the 2**n_a reduced density matrix and
                diagonalize it (capped at n_a <= 13);
* sparse     -- coefficient matrix over only the restricted patterns
                occurring in the support, then the smaller Gram matrix;
* statevector -- full 2**n_a x 2**n_b coefficient grid and an SVD,
                kept as an independent cross-check for small lattices.

All eigensolves go through LAPACK (``eigvalsh``/``svd``), which meets
the 1e-11 absolute-accuracy requirement for symmetric spectra.
Eigenvalues at or below 1e-12 are treated as exact zeros.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import BadSpectrum, DenseCapExceeded, GramCapExceeded, SizeExceeded
from .lattice import Bipartition, restrict_words
from .states import TargetFunction

EIG_CUTOFF = 1e-12
SPECTRUM_SUM_TOL = 1e-6
DEFAULT_DENSE_CAP = 13
DEFAULT_GRAM_CAP = 4096

# Guard for the cross-check grid (2**26 doubles is already half a GB).
_STATEVECTOR_MAX_PIXELS = 26


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Descending squared Schmidt coefficients; ``rank`` counts those above cutoff."""

    lambdas: np.ndarray = field(repr=False)
    rank: int

    def total(self) -> float:
        return float(self.lambdas.sum())


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Dense symmetric reduced density matrix on side A."""

    dim: int
    entries: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EntropyReport:
    """Entropy of one cut plus the bounds it must respect."""

    spectrum: SchmidtSpectrum
    entropy_bits: float
    bound_volume_bits: float
    bound_rank_bits: float
    path: str
    cut: str
    n_a: int
    n_b: int
    l_ab: int
    runtime_ms: float

    @property
    def rank(self) -> int:
        return self.spectrum.rank

    def to_dict(self, base: str = "bits") -> dict:
        key, value = "entropy_bits", self.entropy_bits
        if base == "nats":
            key, value = "entropy_nats", self.entropy_bits * math.log(2.0)
        elif base != "bits":
            raise ValueError(f"base must be 'bits' or 'nats', got {base!r}")
        return {
            "cut": self.cut,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "l_ab": self.l_ab,
            key: value,
            "rank": self.rank,
            "lambdas": [float(v) for v in self.spectrum.lambdas[:32]],
            "path": self.path,
            "runtime_ms": self.runtime_ms,
        }


def _make_spectrum(values: np.ndarray) -> SchmidtSpectrum:
    lam = np.where(values > 0.0, values, 0.0)
    lam = np.sort(lam)[::-1].copy()
    rank = int(np.count_nonzero(lam > EIG_CUTOFF))
    lam.flags.writeable = False
    return SchmidtSpectrum(lam, rank)


def _restricted_indices(f: TargetFunction, part: Bipartition):
    """Distinct A/B restriction patterns of the support, plus index maps."""
    ia = restrict_words(f.words, part.pixels_a)
    ib = restrict_words(f.words, part.pixels_b)
    a_pat, a_idx = np.unique(ia, return_inverse=True)
    b_pat, b_idx = np.unique(ib, return_inverse=True)
    return a_pat, a_idx, b_pat, b_idx


def coefficient_matrix(f: TargetFunction, part: Bipartition):
    """Dense p x q amplitude matrix over occurring restriction patterns.

    Returns ``(c, a_patterns, b_patterns)`` with the patterns sorted
    ascending; ``c[i, j]`` is the amplitude of the image combining
    ``a_patterns[i]`` with ``b_patterns[j]``.
    """
    a_pat, a_idx, b_pat, b_idx = _restricted_indices(f, part)
    c = np.zeros((len(a_pat), len(b_pat)))
    c[a_idx, b_idx] = f.amps
    return c, a_pat, b_pat


def reduced_density_matrix(
    f: TargetFunction, part: Bipartition, dense_cap: int = DEFAULT_DENSE_CAP
) -> ReducedDensityMatrix:
    """Partial trace over side B as an explicit 2**n_a matrix."""
    if part.n_a > dense_cap:
        raise DenseCapExceeded(f"n_a = {part.n_a} exceeds the dense-path cap {dense_cap}")
    dim = 1 << part.n_a
    ia = restrict_words(f.words, part.pixels_a)
    ib = restrict_words(f.words, part.pixels_b)
    b_pat, b_idx = np.unique(ib, return_inverse=True)
    m = np.zeros((dim, len(b_pat)))
    m[ia, b_idx] = f.amps
    rho = m @ m.T
    return ReducedDensityMatrix(dim, rho)


def schmidt_spectrum_dense(
    f: TargetFunction, part: Bipartition, dense_cap: int = DEFAULT_DENSE_CAP
) -> SchmidtSpectrum:
    rho = reduced_density_matrix(f, part, dense_cap=dense_cap)
    return _make_spectrum(np.linalg.eigvalsh(rho.entries))


def schmidt_spectrum_sparse(
    f: TargetFunction, part: Bipartition, gram_cap: int = DEFAULT_GRAM_CAP
) -> SchmidtSpectrum:
    """Spectrum via the smaller Gram matrix of the coefficient matrix.

    Never materializes 2**n_a; the matrix sides are bounded by the
    support size.
    """
    a_pat, a_idx, b_pat, b_idx = _restricted_indices(f, part)
    p, q = len(a_pat), len(b_pat)
    if min(p, q) > gram_cap:
        raise GramCapExceeded(f"Gram matrix side {min(p, q)} exceeds the cap {gram_cap}")
    c = np.zeros((p, q))
    c[a_idx, b_idx] = f.amps
    gram = c @ c.T if p <= q else c.T @ c
    return _make_spectrum(np.linalg.eigvalsh(gram))


def schmidt_spectrum_statevector(f: TargetFunction, part: Bipartition) -> SchmidtSpectrum:
    """Reference spectrum from the full coefficient grid (small N only)."""
    if part.n_a + part.n_b > _STATEVECTOR_MAX_PIXELS:
        raise SizeExceeded(
            f"statevector grid needs 2**{part.n_a + part.n_b} entries "
            f"(cap 2**{_STATEVECTOR_MAX_PIXELS})"
        )
    grid = np.zeros((1 << part.n_a, 1 << part.n_b))
    ia = restrict_words(f.words, part.pixels_a)
    ib = restrict_words(f.words, part.pixels_b)
    grid[ia, ib] = f.amps
    singular = np.linalg.svd(grid, compute_uv=False)
    return _make_spectrum(singular**2)


def von_neumann_entropy(spectrum, base: str = "bits") -> float:
    """-sum(lambda log lambda) with 0 log 0 := 0, in bits or nats."""
    lam = spectrum.lambdas if isinstance(spectrum, SchmidtSpectrum) else np.asarray(spectrum, dtype=float)
    total = float(lam.sum())
    if abs(total - 1.0) > SPECTRUM_SUM_TOL:
        raise BadSpectrum(f"spectrum sums to {total}, expected 1")
    live = lam[lam > EIG_CUTOFF]
    entropy = float(-(live * np.log(live)).sum())
    entropy = max(entropy, 0.0)
    if base == "bits":
        return entropy / math.log(2.0)
    if base == "nats":
        return entropy
    raise ValueError(f"base must be 'bits' or 'nats', got {base!r}")


def entanglement_entropy(
    f: TargetFunction,
    part: Bipartition,
    path: str = "auto",
    dense_cap: int = DEFAULT_DENSE_CAP,
    gram_cap: int = DEFAULT_GRAM_CAP,
    cut_label: str | None = None,
) -> EntropyReport:
    """Entropy across one cut, dispatching to the dense or sparse path.

    ``auto`` picks dense when side A is the smaller side, fits the cap,
    and the support is at least as large as the reduced matrix's row
    count; otherwise sparse. (The sparse Gram matrix never has a larger
    side than the reduced matrix, so dense is only competitive when the
    two coincide.)
    """
    start = time.perf_counter()
    if path == "auto":
        dense_ok = (
            part.n_a <= dense_cap
            and part.n_a <= part.n_b
            and f.support_size >= (1 << part.n_a)
        )
        path = "dense" if dense_ok else "sparse"
    if path == "dense":
        spectrum = schmidt_spectrum_dense(f, part, dense_cap=dense_cap)
    elif path == "sparse":
        spectrum = schmidt_spectrum_sparse(f, part, gram_cap=gram_cap)
    else:
        raise ValueError(f"path must be 'auto', 'dense', or 'sparse', got {path!r}")
    entropy_bits = von_neumann_entropy(spectrum, "bits")
    runtime_ms = (time.perf_counter() - start) * 1e3
    return EntropyReport(
        spectrum=spectrum,
        entropy_bits=entropy_bits,
        bound_volume_bits=float(min(part.n_a, part.n_b)),
        bound_rank_bits=math.log2(max(spectrum.rank, 1)),
        path=path,
        cut=cut_label if cut_label is not None else f"mask:{part.mask_a:x}",
        n_a=part.n_a,
        n_b=part.n_b,
        l_ab=part.l_ab,
        runtime_ms=round(runtime_ms, 3),
    )


@dataclass(frozen=True)
class Property1Result:
    """Outcome of the S_A = S_B symmetry check."""

    passed: bool
    s_a_bits: float
    s_b_bits: float
    delta_bits: float


def check_property1(
    f: TargetFunction, part: Bipartition, tol: float = 1e-9, **kwargs
) -> Property1Result:
    """Entropy must not depend on which side of the cut is traced out."""
    s_a = entanglement_entropy(f, part, **kwargs).entropy_bits
    s_b = entanglement_entropy(f, part.swapped(), **kwargs).entropy_bits
    delta = abs(s_a - s_b)
    return Property1Result(delta <= tol, s_a, s_b, delta)
