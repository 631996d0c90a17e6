"""Lattice geometry, binary images as bit words, and bipartitions.

A binary image on an ``lx`` x ``ly`` pixel lattice is stored as one
machine word: bit ``i = y*lx + x`` holds the value of pixel ``(x, y)``.
The hard cap of 64 pixels keeps every image a single word, and the
canonical enumeration of all images is simply ``0 .. 2**N - 1``.

Adjacency is 4-neighbor, optionally wrapping in both directions.
A bipartition splits the pixels into two nonempty sets A and B; its
boundary is the set of A-pixels with at least one B-neighbor, and the
boundary length counts those pixels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import CutSpecError, EmptySide, SizeExceeded, ZeroDim
from .kernels import gather_bits

MAX_PIXELS = 64


@dataclass(frozen=True)
class LatticeGeometry:
    """Rectangular pixel lattice with 4-neighbor adjacency."""

    lx: int
    ly: int
    periodic: bool = False

    @property
    def n_pixels(self) -> int:
        return self.lx * self.ly

    def index(self, x: int, y: int) -> int:
        """Row-major pixel index of coordinates ``(x, y)``."""
        return y * self.lx + x

    def coords(self, i: int) -> tuple[int, int]:
        return i % self.lx, i // self.lx

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Indices of the 4-neighbors of pixel ``i`` (deduplicated)."""
        x, y = self.coords(i)
        found = set()
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nx, ny = x + dx, y + dy
            if self.periodic:
                nx %= self.lx
                ny %= self.ly
            elif not (0 <= nx < self.lx and 0 <= ny < self.ly):
                continue
            j = self.index(nx, ny)
            if j != i:
                found.add(j)
        return tuple(sorted(found))

    def full_mask(self) -> int:
        return (1 << self.n_pixels) - 1


def make_geometry(lx: int, ly: int, periodic: bool = False) -> LatticeGeometry:
    """Validated lattice constructor."""
    if lx <= 0 or ly <= 0:
        raise ZeroDim(f"lattice sides must be positive, got {lx}x{ly}")
    if lx * ly > MAX_PIXELS:
        raise SizeExceeded(f"{lx}x{ly} = {lx * ly} pixels exceeds the cap of {MAX_PIXELS}")
    return LatticeGeometry(lx, ly, bool(periodic))


@dataclass(frozen=True)
class Bipartition:
    """A/B pixel split with its derived boundary data.

    ``pixels_a``/``pixels_b`` are in ascending pixel order; restricting
    an image to either side uses that order, so the pair of restricted
    patterns determines the image exactly.
    """

    geom: LatticeGeometry
    mask_a: int
    pixels_a: tuple[int, ...] = field(repr=False)
    pixels_b: tuple[int, ...] = field(repr=False)
    boundary: frozenset[int] = field(repr=False)
    cut_edges: frozenset[tuple[int, int]] = field(repr=False)

    @property
    def n_a(self) -> int:
        return len(self.pixels_a)

    @property
    def n_b(self) -> int:
        return len(self.pixels_b)

    @property
    def l_ab(self) -> int:
        """Boundary length: number of A-pixels adjacent to B."""
        return len(self.boundary)

    def swapped(self) -> "Bipartition":
        """The same cut with the roles of A and B exchanged."""
        return make_bipartition(self.geom, self.mask_a ^ self.geom.full_mask())


def make_bipartition(geom: LatticeGeometry, mask_a: int) -> Bipartition:
    """Build a bipartition from the A-membership mask."""
    full = geom.full_mask()
    if mask_a & ~full:
        raise CutSpecError(f"mask {mask_a:#x} has bits outside the {geom.n_pixels}-pixel lattice")
    if mask_a == 0 or mask_a == full:
        raise EmptySide("both sides of a bipartition must be nonempty")
    pixels_a = tuple(i for i in range(geom.n_pixels) if (mask_a >> i) & 1)
    pixels_b = tuple(i for i in range(geom.n_pixels) if not (mask_a >> i) & 1)
    boundary = set()
    cut_edges = set()
    for i in pixels_a:
        for j in geom.neighbors(i):
            if not (mask_a >> j) & 1:
                boundary.add(i)
                cut_edges.add((min(i, j), max(i, j)))
    return Bipartition(geom, mask_a, pixels_a, pixels_b, frozenset(boundary), frozenset(cut_edges))


@dataclass(frozen=True)
class RegionR:
    """Shell of width ``r`` just inside A: pixels BFS-reachable from B in at most r steps."""

    r: int
    pixels: frozenset[int]


def region_r(part: Bipartition, r: int) -> RegionR:
    """A-pixels within graph distance r of region B (empty for r = 0).

    Width 1 reproduces the boundary; widths beyond the depth of A
    saturate at all of A.
    """
    if r < 0:
        raise ValueError("region width must be nonnegative")
    geom = part.geom
    dist = {i: 0 for i in part.pixels_b}
    queue = deque(part.pixels_b)
    while queue:
        i = queue.popleft()
        for j in geom.neighbors(i):
            if j not in dist:
                dist[j] = dist[i] + 1
                queue.append(j)
    pixels = frozenset(i for i in part.pixels_a if dist.get(i, r + 1) <= r)
    return RegionR(r, pixels)


def restrict(word: int, pixels) -> int:
    """Bit pattern of ``word`` over ``pixels``, in ascending pixel order."""
    out = 0
    for j, p in enumerate(sorted(pixels)):
        out |= ((word >> p) & 1) << j
    return out


def recombine(pattern_a: int, pixels_a, pattern_b: int, pixels_b) -> int:
    """Reassemble a full image word from two restricted patterns."""
    word = 0
    for j, p in enumerate(sorted(pixels_a)):
        word |= ((pattern_a >> j) & 1) << p
    for j, p in enumerate(sorted(pixels_b)):
        word |= ((pattern_b >> j) & 1) << p
    return word


def restrict_words(words: np.ndarray, pixels) -> np.ndarray:
    """Vectorized :func:`restrict` over an array of image words."""
    positions = np.asarray(sorted(pixels), dtype=np.int64)
    return gather_bits(words, positions)


def cols_mask(geom: LatticeGeometry, k: int) -> int:
    """A-mask selecting columns 0 .. k-1."""
    mask = 0
    for y in range(geom.ly):
        for x in range(min(k, geom.lx)):
            mask |= 1 << geom.index(x, y)
    return mask


def rows_mask(geom: LatticeGeometry, k: int) -> int:
    """A-mask selecting rows 0 .. k-1."""
    mask = 0
    for y in range(min(k, geom.ly)):
        for x in range(geom.lx):
            mask |= 1 << geom.index(x, y)
    return mask


_CUT_GRAMMAR = "expected 'cols<K', 'rows<K', or 'mask:<hex>'"


def parse_cut(geom: LatticeGeometry, spec: str) -> Bipartition:
    """Parse a cut specification string into a bipartition.

    Grammar: ``cols<K`` puts columns 0..K-1 in A, ``rows<K`` puts rows
    0..K-1 in A, ``mask:<hex>`` gives the A-mask explicitly (bit i of
    the hex word = pixel i).
    """
    spec = spec.strip()
    if spec.startswith("cols<") or spec.startswith("rows<"):
        try:
            k = int(spec[5:])
        except ValueError:
            raise CutSpecError(f"bad cut {spec!r}: {_CUT_GRAMMAR}") from None
        limit = geom.lx if spec.startswith("cols<") else geom.ly
        if not 1 <= k < limit:
            raise CutSpecError(f"bad cut {spec!r}: K must be in [1, {limit - 1}] for this lattice")
        mask = cols_mask(geom, k) if spec.startswith("cols<") else rows_mask(geom, k)
        return make_bipartition(geom, mask)
    if spec.startswith("mask:"):
        text = spec[5:].removeprefix("0x").removeprefix("0X")
        try:
            mask = int(text, 16)
        except ValueError:
            raise CutSpecError(f"bad cut {spec!r}: {_CUT_GRAMMAR}") from None
        return make_bipartition(geom, mask)
    raise CutSpecError(f"bad cut {spec!r}: {_CUT_GRAMMAR}")
