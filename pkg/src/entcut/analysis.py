"""Scaling scans, structural assumption checks, and range estimation.

The scan classifies entropy growth across a family of cuts. The
finite-size verdict rule (recorded here, since the asymptotic
definitions cannot be evaluated on a desk-scale lattice):

* ``area``    -- every cut's entropy fits the one-bit-per-boundary-pixel
                 budget, ``S <= l_ab`` (degenerate all-zero scans
                 included);
* ``volume``  -- the mean saturation ``S / min(n_a, n_b)`` is at least
                 0.55, i.e. entropy tracks the smaller side's size.
                 (Indicator states cannot saturate further: a set of M
                 of the 2**N images overlaps the unentangled uniform
                 state with weight M/2**N, which pins the top Schmidt
                 value and caps the saturation near 1/2 + 1/min.);
* ``sub-volume`` / ``inconclusive`` -- between the two.

The range estimator finds the smallest boundary-shell width r such
that the coincidence counts between restricted patterns depend only on
the shell state; a passing width caps the entropy at ``r * l_ab`` bits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .entropy import EntropyReport, entanglement_entropy
from .errors import TooFewCuts
from .kernels import gather_bits
from .lattice import Bipartition, cols_mask, make_bipartition, region_r, restrict_words, rows_mask
from .tasks import TaskSpec

AREA_BUDGET_TOL = 1e-9
ZERO_ENTROPY_TOL = 1e-6
VOLUME_SATURATION = 0.55
SUB_VOLUME_CEILING = 0.35


# ---------------------------------------------------------------------------
# Cut scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    cut_id: str
    n_a: int
    n_b: int
    l_ab: int
    entropy_bits: float
    rank: int


@dataclass(frozen=True)
class FitResult:
    """Least-squares line of entropy_bits against l_ab."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    degenerate: bool


@dataclass(frozen=True)
class ScanResult:
    task_name: str
    family: str
    rows: tuple[ScanRow, ...]
    fit: FitResult
    verdict: str
    reports: tuple[EntropyReport, ...] = field(repr=False, default=())


def cut_family(task: TaskSpec, family: str, count: int | None = None, seed: int = 0):
    """Named list of bipartitions for a scan family."""
    geom = task.geom
    cuts: list[tuple[str, Bipartition]] = []
    if family == "vertical":
        for m in range(1, geom.lx):
            cuts.append((f"cols<{m}", make_bipartition(geom, cols_mask(geom, m))))
    elif family == "horizontal":
        for m in range(1, geom.ly):
            cuts.append((f"rows<{m}", make_bipartition(geom, rows_mask(geom, m))))
    elif family == "seeded-random":
        rng = np.random.default_rng(seed)
        wanted = 10 if count is None else count
        full = geom.full_mask()
        wanted = min(wanted, full - 1)  # only 2**N - 2 distinct masks exist
        seen = set()
        while len(cuts) < wanted:
            mask = 0
            while mask == 0 or mask == full:
                mask = int(rng.integers(1, full, dtype=np.uint64, endpoint=True))
            if mask in seen:
                continue
            seen.add(mask)
            cuts.append((f"mask:{mask:x}", make_bipartition(geom, mask)))
    else:
        raise ValueError(f"unknown cut family {family!r}")
    if family != "seeded-random" and count is not None:
        cuts = cuts[:count]
    if not cuts:
        raise TooFewCuts(f"family {family!r} yields no cuts on a {geom.lx}x{geom.ly} lattice")
    return cuts


def _fit_line(x: np.ndarray, y: np.ndarray) -> FitResult:
    n = len(x)
    if n < 2 or len(np.unique(x)) < 2:
        intercept = float(y.mean()) if n else 0.0
        return FitResult(0.0, intercept, 0.0, n, True)
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    ss_res = float(((y - predicted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot < 1e-18:
        r_squared = 1.0 if ss_res < 1e-18 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    degenerate = len(np.unique(x)) < 3
    return FitResult(float(slope), float(intercept), r_squared, n, degenerate)


def classify_scaling(rows) -> str:
    """Finite-size area/volume verdict; see the module docstring."""
    entropies = np.array([r.entropy_bits for r in rows])
    if entropies.max(initial=0.0) <= ZERO_ENTROPY_TOL:
        return "area"
    if all(r.entropy_bits <= r.l_ab + AREA_BUDGET_TOL for r in rows):
        return "area"
    saturation = float(np.mean([r.entropy_bits / min(r.n_a, r.n_b) for r in rows]))
    if saturation >= VOLUME_SATURATION:
        return "volume"
    if saturation < SUB_VOLUME_CEILING:
        return "sub-volume"
    return "inconclusive"


def scan_cuts(
    task: TaskSpec,
    family: str,
    count: int | None = None,
    seed: int = 0,
    workers: int = 1,
    **entropy_kwargs,
) -> ScanResult:
    """Entropy of one task across a cut family, with fit and verdict."""
    cuts = cut_family(task, family, count=count, seed=seed)
    f = task.indicator()

    def run(item):
        cut_id, part = item
        return entanglement_entropy(f, part, cut_label=cut_id, **entropy_kwargs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run, cuts))
    else:
        reports = [run(item) for item in cuts]
    rows = tuple(
        ScanRow(rep.cut, rep.n_a, rep.n_b, rep.l_ab, rep.entropy_bits, rep.rank)
        for rep in reports
    )
    fit = _fit_line(
        np.array([r.l_ab for r in rows], dtype=float),
        np.array([r.entropy_bits for r in rows]),
    )
    verdict = classify_scaling(rows)
    return ScanResult(task.name, family, rows, fit, verdict, tuple(reports))


def scan_csv_text(result: ScanResult) -> str:
    """Deterministic CSV rendering of the scan rows."""
    lines = ["cut_id,n_a,n_b,l_ab,entropy_bits,rank"]
    for r in result.rows:
        lines.append(
            f"{r.cut_id},{r.n_a},{r.n_b},{r.l_ab},{format(r.entropy_bits, '.12g')},{r.rank}"
        )
    return "\n".join(lines) + "\n"


def scan_sidecar(result: ScanResult) -> dict:
    """Fit and verdict companion for the CSV."""
    return {
        "task": result.task_name,
        "family": result.family,
        "rows": len(result.rows),
        "fit": {
            "slope": result.fit.slope,
            "intercept": result.fit.intercept,
            "r_squared": result.fit.r_squared,
            "n_points": result.fit.n_points,
            "degenerate": result.fit.degenerate,
        },
        "verdict": result.verdict,
    }


# ---------------------------------------------------------------------------
# Coincidence counts and the two structural assumptions
# ---------------------------------------------------------------------------


def _restriction_groups(task: TaskSpec, part: Bipartition):
    """Label-1 words with A/B restrictions, sorted into B-restriction runs."""
    words = np.fromiter(task.label1, dtype=np.uint64, count=len(task.label1))
    words = np.sort(words)
    ia = restrict_words(words, part.pixels_a)
    ib = restrict_words(words, part.pixels_b)
    order = np.lexsort((ia, ib))
    return words[order], ia[order], ib[order]


def coincidence_counts(task: TaskSpec, part: Bipartition) -> dict[tuple[int, int], int]:
    """Number of B-patterns completing both patterns of each A-pattern pair.

    Keys are ordered pairs ``(a, a')`` with ``a <= a'``; absent pairs
    have count zero. The diagonal counts the completions of a single
    pattern.
    """
    _, ia, ib = _restriction_groups(task, part)
    counts: dict[tuple[int, int], int] = {}
    start = 0
    n = len(ib)
    while start < n:
        stop = start
        while stop < n and ib[stop] == ib[start]:
            stop += 1
        group = sorted(int(a) for a in ia[start:stop])
        for i, a in enumerate(group):
            for a2 in group[i:]:
                key = (a, a2)
                counts[key] = counts.get(key, 0) + 1
        start = stop
    return counts


def coincidence_lookup(counts, a: int, a2: int) -> int:
    return counts.get((a, a2) if a <= a2 else (a2, a), 0)


@dataclass(frozen=True)
class Assumption1Result:
    """Whether equal-B images always agree on the boundary."""

    passed: bool
    counterexample: tuple[int, int] | None


def check_assumption1(task: TaskSpec, part: Bipartition) -> Assumption1Result:
    """Fails iff two label-1 images share region B but differ on the boundary."""
    words, _, ib = _restriction_groups(task, part)
    boundary = sorted(part.boundary)
    bd = restrict_words(words, boundary)
    start = 0
    n = len(words)
    while start < n:
        stop = start
        while stop < n and ib[stop] == ib[start]:
            stop += 1
        if stop - start > 1:
            patterns = bd[start:stop]
            first = patterns[0]
            for offset in range(1, stop - start):
                if patterns[offset] != first:
                    return Assumption1Result(
                        False, (int(words[start]), int(words[start + offset]))
                    )
        start = stop
    return Assumption1Result(True, None)


# ---------------------------------------------------------------------------
# Entanglement-range estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RangeEstimate:
    """Smallest shell width at which coincidence counts compress.

    ``r_star`` is None when no width up to ``r_max`` passes; the CLI
    renders that as ">r_max". ``bound_bits`` is ``r_star * l_ab``.
    """

    r_star: int | None
    r_max: int
    assumption1_pass: bool
    bound_bits: float | None
    counterexample: tuple[int, int] | None
    detail: str


def _shell_positions(part: Bipartition, r: int):
    """Indices (within the packed A-pattern) of the width-r shell pixels."""
    shell = region_r(part, r).pixels
    index_in_a = {p: i for i, p in enumerate(part.pixels_a)}
    return np.array(sorted(index_in_a[p] for p in shell), dtype=np.int64)


def _counts_compress_at(a_patterns: np.ndarray, counts, shell_idx: np.ndarray):
    """Check that counts are constant over shell-class pairs.

    Returns ``(True, "")`` or ``(False, description)`` with the first
    inconsistent pair of pattern pairs.
    """
    keys = gather_bits(a_patterns, shell_idx)
    seen: dict[tuple[int, int], tuple[int, int, int]] = {}
    pats = [int(a) for a in a_patterns]
    classes = [int(k) for k in keys]
    for i, a in enumerate(pats):
        for j in range(i, len(pats)):
            a2 = pats[j]
            ckey = (classes[i], classes[j]) if classes[i] <= classes[j] else (classes[j], classes[i])
            value = coincidence_lookup(counts, a, a2)
            if ckey in seen:
                prior_a, prior_a2, prior_value = seen[ckey]
                if prior_value != value:
                    return False, (
                        f"pairs ({prior_a:#x},{prior_a2:#x}) and ({a:#x},{a2:#x}) share a "
                        f"shell class but have counts {prior_value} != {value}"
                    )
            else:
                seen[ckey] = (a, a2, value)
    return True, ""


def estimate_range(task: TaskSpec, part: Bipartition, r_max: int) -> RangeEstimate:
    """Scan shell widths 1..r_max for the coincidence-compression width."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    a1 = check_assumption1(task, part)
    counts = coincidence_counts(task, part)
    _, ia, _ = _restriction_groups(task, part)
    a_patterns = np.unique(ia)
    detail = ""
    for r in range(1, r_max + 1):
        shell_idx = _shell_positions(part, r)
        passed, why = _counts_compress_at(a_patterns, counts, shell_idx)
        if passed:
            return RangeEstimate(
                r_star=r,
                r_max=r_max,
                assumption1_pass=a1.passed,
                bound_bits=float(r * part.l_ab),
                counterexample=a1.counterexample,
                detail="",
            )
        detail = f"width {r}: {why}"
    return RangeEstimate(
        r_star=None,
        r_max=r_max,
        assumption1_pass=a1.passed,
        bound_bits=None,
        counterexample=a1.counterexample,
        detail=detail,
    )


def range_report(estimate: RangeEstimate, part: Bipartition, entropy_bits: float) -> dict:
    """JSON-ready rendering of a range estimate plus the bound check."""
    r_star = estimate.r_star if estimate.r_star is not None else f">{estimate.r_max}"
    doc = {
        "r_star": r_star,
        "assumption1_pass": estimate.assumption1_pass,
        "l_ab": part.l_ab,
        "bound_bits": estimate.bound_bits,
        "entropy_bits": entropy_bits,
        "bound_holds": (
            entropy_bits <= estimate.bound_bits + AREA_BUDGET_TOL
            if estimate.bound_bits is not None
            else None
        ),
    }
    if estimate.counterexample is not None:
        doc["assumption1_counterexample"] = [format(w, "x") for w in estimate.counterexample]
    if estimate.detail:
        doc["detail"] = estimate.detail
    return doc


# ---------------------------------------------------------------------------
# Convolutional capacity relation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChannelRequirement:
    """Channels needed to carry ``r_bits`` of cross-boundary information."""

    n_c: int
    channels: int
    channels_depth1: int
    consistent: bool


def cnn_channel_requirement(r_bits: float, n_c: int) -> ChannelRequirement:
    """Channel count D with n_c log2(D) >= r_bits, minimal by ceiling.

    Splitting the requirement over n_c layers turns the depth-1 channel
    count D0 into roughly D0**(1/n_c); the ``consistent`` flag confirms
    the two roundings agree to within one channel.
    """
    if r_bits < 0:
        raise ValueError("entanglement range must be nonnegative")
    if n_c < 1:
        raise ValueError("need at least one convolution layer")
    channels = math.ceil(2.0 ** (r_bits / n_c))
    depth1 = math.ceil(2.0**r_bits)
    via_root = math.ceil(depth1 ** (1.0 / n_c))
    return ChannelRequirement(n_c, channels, depth1, abs(channels - via_root) <= 1)
