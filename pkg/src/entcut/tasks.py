"""Generators for benchmark classification tasks and reference oracles.

The loop-recognition task realizes "every drawn line closes up" as an
even-degree constraint on edge variables of a square vertex grid: a
pixel is an edge, and an image has label 1 exactly when every vertex
touches an even number of set edges. Those configurations form the
cycle space of the grid graph, so they are generated exactly as the
XOR span of a fundamental cycle basis rather than by filtering all
2**E configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .errors import CountExceeded, EmptySet, SizeExceeded
from .kernels import popcount, xor_span
from .lattice import LatticeGeometry, make_geometry
from .states import TargetFunction, from_label1_set, load_task_file, save_task_file

_PARITY_MAX_PIXELS = 24


@dataclass(frozen=True)
class TaskSpec:
    """A named label-1 image set plus the parameters that produced it."""

    name: str
    geom: LatticeGeometry
    label1: frozenset[int]
    provenance: dict

    def indicator(self) -> TargetFunction:
        return from_label1_set(self.geom, self.label1)


def save_task(task: TaskSpec, path):
    meta = {"name": task.name, **task.provenance}
    save_task_file(path, task.geom, task.label1, meta)


def load_task(path) -> TaskSpec:
    geom, label1, meta = load_task_file(path)
    meta = dict(meta)
    name = meta.pop("name", str(path))
    return TaskSpec(name, geom, label1, meta)


# ---------------------------------------------------------------------------
# Closed-loop recognition (edge-variable lattice)
# ---------------------------------------------------------------------------


def _loop_lattice(k: int, periodic: bool):
    """Pixel geometry and edge list ``(pixel, vertex_u, vertex_v)``.

    Horizontal edges occupy the first pixel rows (row-major by vertex),
    vertical edges the remaining rows. The open layout has one unused
    pixel at the end of every horizontal-edge row to keep rows equal
    width; unused pixels never appear in a label-1 image.
    """
    if k < 1:
        raise ValueError("vertex grid must be at least 1x1")
    edges = []
    if periodic:
        geom = make_geometry(k, 2 * k, periodic=True)

        def vid(vx, vy):
            return vy * k + vx

        for vy in range(k):
            for vx in range(k):
                edges.append((vy * k + vx, vid(vx, vy), vid((vx + 1) % k, vy)))
        for vy in range(k):
            for vx in range(k):
                edges.append((k * k + vy * k + vx, vid(vx, vy), vid(vx, (vy + 1) % k)))
        n_vertices = k * k
    else:
        geom = make_geometry(k + 1, 2 * k + 1, periodic=False)

        def vid(vx, vy):
            return vy * (k + 1) + vx

        for vy in range(k + 1):
            for vx in range(k):
                edges.append((vy * (k + 1) + vx, vid(vx, vy), vid(vx + 1, vy)))
        base = (k + 1) * (k + 1)
        for vy in range(k):
            for vx in range(k + 1):
                edges.append((base + vy * (k + 1) + vx, vid(vx, vy), vid(vx, vy + 1)))
        n_vertices = (k + 1) * (k + 1)
    return geom, edges, n_vertices


def _cycle_basis(edges, n_vertices):
    """Fundamental cycles of the edge multigraph, one word per chord."""
    adjacency = [[] for _ in range(n_vertices)]
    for pixel, u, v in edges:
        adjacency[u].append((pixel, v))
        adjacency[v].append((pixel, u))
    path_word = [None] * n_vertices  # XOR of tree-edge pixels on the root path
    tree = set()
    for root in range(n_vertices):
        if path_word[root] is not None:
            continue
        path_word[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for pixel, v in adjacency[u]:
                if path_word[v] is None:
                    path_word[v] = path_word[u] ^ (1 << pixel)
                    tree.add(pixel)
                    stack.append(v)
    basis = []
    for pixel, u, v in edges:
        if pixel not in tree:
            basis.append((1 << pixel) ^ path_word[u] ^ path_word[v])
    return basis


def gen_closed_loops(k: int, periodic: bool = True) -> TaskSpec:
    """All even-degree edge configurations of a k x k vertex grid.

    Periodic grids have 2k**2 edge pixels and 2**(k**2 + 1) label-1
    images; generation is exact and never enumerates all images.
    """
    geom, edges, n_vertices = _loop_lattice(k, periodic)
    basis = _cycle_basis(edges, n_vertices)
    words = xor_span(np.array(basis, dtype=np.uint64))
    label1 = frozenset(int(w) for w in words)
    name = f"loops_k{k}_{'periodic' if periodic else 'open'}"
    provenance = {
        "generator": "closed_loops",
        "k": k,
        "periodic": periodic,
        "layout": "horizontal-edge rows first, then vertical-edge rows",
        "n_edges": len(edges),
    }
    return TaskSpec(name, geom, label1, provenance)


def loop_vertical_cut_crossings(k: int, periodic: bool = True) -> int:
    """Grid edges crossing a vertical strip cut of the vertex lattice.

    A ``cols<m`` cut of the edge-pixel lattice separates the edges owned
    by the first m vertex columns from the rest; the crossing edges are
    the horizontal ones spanning the seam(s): 2k on the periodic grid
    (two seams), k+1 on the open grid (one seam). Independent of m.
    """
    return 2 * k if periodic else k + 1


# ---------------------------------------------------------------------------
# Random image sets
# ---------------------------------------------------------------------------


def _uniform_words(rng: np.random.Generator, size: int, n_bits: int) -> np.ndarray:
    hi = rng.integers(0, 1 << 32, size=size, dtype=np.uint64)
    lo = rng.integers(0, 1 << 32, size=size, dtype=np.uint64)
    w = (hi << np.uint64(32)) | lo
    if n_bits < 64:
        w &= np.uint64((1 << n_bits) - 1)
    return w


def _sample_distinct(rng: np.random.Generator, count: int, n_bits: int) -> set[int]:
    chosen: set[int] = set()
    while len(chosen) < count:
        batch = _uniform_words(rng, max(64, 2 * (count - len(chosen))), n_bits)
        for w in batch.tolist():
            chosen.add(w)
            if len(chosen) == count:
                break
    return chosen


def gen_random_set(geom: LatticeGeometry, count: int, seed: int) -> TaskSpec:
    """``count`` distinct images drawn uniformly, deterministic in ``seed``."""
    n = geom.n_pixels
    if count < 1:
        raise EmptySet("need at least one image")
    if count > (1 << n):
        raise CountExceeded(f"{count} images requested but the lattice only has 2**{n}")
    rng = np.random.default_rng(seed)
    if count <= (1 << n) // 2 or n > 24:
        label1 = frozenset(_sample_distinct(rng, count, n))
    else:
        # Majority of the space requested: sample the complement instead.
        excluded = _sample_distinct(rng, (1 << n) - count, n)
        label1 = frozenset(w for w in range(1 << n) if w not in excluded)
    name = f"random_{geom.lx}x{geom.ly}_c{count}_s{seed}"
    provenance = {
        "generator": "random_set",
        "lx": geom.lx,
        "ly": geom.ly,
        "periodic": geom.periodic,
        "count": count,
        "seed": seed,
    }
    return TaskSpec(name, geom, label1, provenance)


# ---------------------------------------------------------------------------
# Popcount parity (analytic fixture: rank-2 spectrum for every cut)
# ---------------------------------------------------------------------------


def gen_parity(geom: LatticeGeometry, even: bool = True) -> TaskSpec:
    """Images whose number of set pixels has the requested parity."""
    n = geom.n_pixels
    if n < 2:
        raise ValueError("parity task needs at least 2 pixels")
    if n > _PARITY_MAX_PIXELS:
        raise SizeExceeded(f"parity enumeration over 2**{n} images exceeds 2**{_PARITY_MAX_PIXELS}")
    words = np.arange(1 << n, dtype=np.uint64)
    wanted = 0 if even else 1
    keep = (popcount(words) & np.uint64(1)) == wanted
    label1 = frozenset(int(w) for w in words[keep])
    name = f"parity_{geom.lx}x{geom.ly}_{'even' if even else 'odd'}"
    provenance = {
        "generator": "parity",
        "lx": geom.lx,
        "ly": geom.ly,
        "periodic": geom.periodic,
        "even": even,
    }
    return TaskSpec(name, geom, label1, provenance)


# ---------------------------------------------------------------------------
# Haar-average reference entropy
# ---------------------------------------------------------------------------


def page_reference_entropy(n_a: int, n_b: int) -> float:
    """Average entanglement entropy (nats) of a random pure state.

    For subsystem dimensions m = 2**min(n_a, n_b) and n = 2**max:
    ``sum_{k=n+1}^{mn} 1/k - (m - 1) / (2n)``, evaluated via digamma.
    """
    if n_a < 0 or n_b < 0:
        raise ValueError("pixel counts must be nonnegative")
    m = 1 << min(n_a, n_b)
    n = 1 << max(n_a, n_b)
    if m == 1:
        return 0.0
    harmonic_span = float(digamma(m * n + 1) - digamma(n + 1))
    return harmonic_span - (m - 1) / (2.0 * n)
