"""Sparse normalized amplitude functions over binary images.

A target function assigns a real amplitude to every image word; only
the nonzero amplitudes (the support) are stored. All constructors
normalize to unit L2 norm, so a target function doubles as a state
vector in the 2**N dimensional space spanned by the images.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySet, GeometryMismatch, SizeExceeded, TaskFileError
from .lattice import LatticeGeometry, make_geometry

NORM_TOL = 1e-12

# Dense materialization cap for constructors that touch all 2**N images.
DEFAULT_DENSE_PIXELS = 20


@dataclass(frozen=True)
class TargetFunction:
    """Normalized sparse amplitude map, immutable after construction.

    ``words`` is sorted ascending and ``amps[i]`` is the amplitude of
    ``words[i]``; absent words have amplitude zero.
    """

    geom: LatticeGeometry
    words: np.ndarray = field(repr=False)
    amps: np.ndarray = field(repr=False)

    @property
    def support_size(self) -> int:
        return len(self.words)

    def amplitude(self, word: int) -> float:
        i = np.searchsorted(self.words, np.uint64(word))
        if i < len(self.words) and self.words[i] == np.uint64(word):
            return float(self.amps[i])
        return 0.0

    def norm_sq(self) -> float:
        return float(np.dot(self.amps, self.amps))


def _build(geom: LatticeGeometry, words: np.ndarray, amps: np.ndarray) -> TargetFunction:
    """Sort, drop zeros, normalize, and freeze."""
    words = np.asarray(words, dtype=np.uint64)
    amps = np.asarray(amps, dtype=np.float64)
    keep = amps != 0.0
    words, amps = words[keep], amps[keep]
    if len(words) == 0:
        raise EmptySet("target function needs at least one nonzero amplitude")
    order = np.argsort(words, kind="stable")
    words, amps = words[order], amps[order]
    amps = amps / np.linalg.norm(amps)
    words.flags.writeable = False
    amps.flags.writeable = False
    return TargetFunction(geom, words, amps)


def _check_words(geom: LatticeGeometry, words: np.ndarray):
    if len(words) and int(words.max()) >> geom.n_pixels:
        bad = int(words.max())
        raise ValueError(f"image {bad:#x} has bits outside the {geom.n_pixels}-pixel lattice")


def from_label1_set(geom: LatticeGeometry, images, weights=None) -> TargetFunction:
    """Indicator-style state: uniform amplitude on the given images.

    With ``weights`` (a mapping word -> weight, or a sequence aligned
    with ``images``) the amplitudes are the weights, L2-normalized.
    """
    if weights is None:
        words = np.fromiter(set(images), dtype=np.uint64, count=-1)
        if len(words) == 0:
            raise EmptySet("label-1 image set is empty")
        _check_words(geom, words)
        amps = np.full(len(words), 1.0)
        return _build(geom, words, amps)
    images = list(images)
    if not images:
        raise EmptySet("label-1 image set is empty")
    if len(set(images)) != len(images):
        raise ValueError("duplicate images in weighted label set")
    if isinstance(weights, Mapping):
        w = np.array([weights[s] for s in images], dtype=np.float64)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (len(images),):
            raise ValueError("weights must align one-to-one with images")
    words = np.asarray(images, dtype=np.uint64)
    _check_words(geom, words)
    return _build(geom, words, w)


def product_function(
    geom: LatticeGeometry, pixel_weights, max_pixels: int = DEFAULT_DENSE_PIXELS
) -> TargetFunction:
    """Exponential-of-linear state: amplitude(s) proportional to exp(sum_i a_i s_i).

    Dense over all 2**N images, so N is capped (default 20). Factorizes
    across pixels, hence carries no entanglement across any cut.
    """
    n = geom.n_pixels
    if n > max_pixels:
        raise SizeExceeded(f"dense materialization of 2**{n} amplitudes exceeds the cap 2**{max_pixels}")
    a = np.asarray(pixel_weights, dtype=np.float64)
    if a.shape != (n,):
        raise ValueError(f"need one weight per pixel ({n}), got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("pixel weights must be finite")
    words = np.arange(1 << n, dtype=np.uint64)
    energy = np.zeros(len(words))
    for i in range(n):
        energy += a[i] * ((words >> np.uint64(i)) & np.uint64(1)).astype(np.float64)
    amps = np.exp(energy - energy.max())
    return _build(geom, words, amps)


def inner_product(f: TargetFunction, g: TargetFunction) -> float:
    """Sum of amplitude products over the support intersection."""
    if f.geom != g.geom:
        raise GeometryMismatch(f"functions live on {f.geom} vs {g.geom}")
    _, ia, ib = np.intersect1d(f.words, g.words, assume_unique=True, return_indices=True)
    return float(np.dot(f.amps[ia], g.amps[ib]))


# ---------------------------------------------------------------------------
# Task files: {"lx": int, "ly": int, "periodic": bool,
#              "label1": ["<hex image word>", ...], "meta": {...}}
# Hex words are little-endian in pixel order (bit i = pixel i).
# ---------------------------------------------------------------------------


def save_task_file(path, geom: LatticeGeometry, label1, meta: dict | None = None):
    """Write a task file; identical inputs yield byte-identical files."""
    doc = {
        "lx": geom.lx,
        "ly": geom.ly,
        "periodic": geom.periodic,
        "label1": [format(int(w), "x") for w in sorted(int(s) for s in label1)],
    }
    if meta is not None:
        doc["meta"] = meta
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_task_file(path):
    """Read a task file; returns ``(geom, label1, meta)``.

    Rejects duplicate images and words with bits beyond the lattice.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise TaskFileError(f"cannot read task file {path}: {exc}") from exc
    for key in ("lx", "ly", "periodic", "label1"):
        if key not in doc:
            raise TaskFileError(f"task file {path} lacks required key {key!r}")
    if not isinstance(doc["lx"], int) or not isinstance(doc["ly"], int):
        raise TaskFileError("lx and ly must be integers")
    if not isinstance(doc["periodic"], bool):
        raise TaskFileError("periodic must be a boolean")
    if not isinstance(doc["label1"], list) or not doc["label1"]:
        raise TaskFileError("label1 must be a nonempty list of hex image words")
    geom = make_geometry(doc["lx"], doc["ly"], doc["periodic"])
    label1 = []
    for item in doc["label1"]:
        try:
            word = int(str(item), 16)
        except ValueError:
            raise TaskFileError(f"bad image word {item!r}") from None
        if word < 0 or word >> geom.n_pixels:
            raise TaskFileError(f"image {item!r} has bits outside the {geom.n_pixels}-pixel lattice")
        label1.append(word)
    if len(set(label1)) != len(label1):
        raise TaskFileError("duplicate images in label1")
    return geom, frozenset(label1), doc.get("meta", {})
