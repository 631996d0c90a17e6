"""Generator correctness: loops vs brute force, determinism, Page oracle."""

import math

import numpy as np
import pytest
from scipy import linalg

from entcut.errors import CountExceeded, SizeExceeded
from entcut.lattice import make_geometry, parse_cut
from entcut.entropy import entanglement_entropy
from entcut.states import save_task_file
from entcut.tasks import (
    gen_closed_loops,
    gen_parity,
    gen_random_set,
    load_task,
    loop_vertical_cut_crossings,
    page_reference_entropy,
    save_task,
)


# --- closed loops ----------------------------------------------------------


def periodic_edge_endpoints(k):
    """Documented layout: horizontal-edge pixels first, then vertical."""
    edges = {}
    for vy in range(k):
        for vx in range(k):
            edges[vy * k + vx] = (vy * k + vx, vy * k + (vx + 1) % k)
            edges[k * k + vy * k + vx] = (vy * k + vx, ((vy + 1) % k) * k + vx)
    return edges


def open_edge_endpoints(k):
    w = k + 1
    edges = {}
    for vy in range(w):
        for vx in range(k):
            edges[vy * w + vx] = (vy * w + vx, vy * w + vx + 1)
    for vy in range(k):
        for vx in range(w):
            edges[w * w + vy * w + vx] = (vy * w + vx, (vy + 1) * w + vx)
    return edges


def brute_force_even_configs(edges, n_vertices):
    """All pixel words where every vertex has even degree (ignoring self-loops)."""
    pixels = sorted(edges)
    valid = set()
    for choice in range(1 << len(pixels)):
        degree = [0] * n_vertices
        word = 0
        for bit, pixel in enumerate(pixels):
            if (choice >> bit) & 1:
                word |= 1 << pixel
                u, v = edges[pixel]
                degree[u] += 1
                degree[v] += 1
        if all(d % 2 == 0 for d in degree):
            valid.add(word)
    return valid


def test_loops_k2_periodic_brute_force():
    task = gen_closed_loops(2, periodic=True)
    assert task.geom.lx == 2 and task.geom.ly == 4 and task.geom.periodic
    expected = brute_force_even_configs(periodic_edge_endpoints(2), 4)
    assert len(expected) == 32  # 2**(E - V + 1) = 2**5
    assert task.label1 == frozenset(expected)


def test_loops_k2_open_brute_force():
    task = gen_closed_loops(2, periodic=False)
    assert task.geom.lx == 3 and task.geom.ly == 5 and not task.geom.periodic
    expected = brute_force_even_configs(open_edge_endpoints(2), 9)
    assert len(expected) == 1 << (12 - 9 + 1)
    assert task.label1 == frozenset(expected)


def test_loops_counts():
    assert len(gen_closed_loops(3, periodic=True).label1) == 1 << 10
    assert len(gen_closed_loops(1, periodic=True).label1) == 4  # two self-loops


def test_loops_zero_image_is_valid():
    assert 0 in gen_closed_loops(2, periodic=True).label1
    assert 0 in gen_closed_loops(3, periodic=True).label1


def test_single_edge_is_invalid():
    task = gen_closed_loops(2, periodic=True)
    for pixel in range(8):
        assert (1 << pixel) not in task.label1


def test_loops_closed_under_xor():
    label1 = sorted(gen_closed_loops(2, periodic=True).label1)
    rng = np.random.default_rng(0)
    for _ in range(100):
        a, b = rng.choice(len(label1), size=2)
        assert (label1[a] ^ label1[b]) in label1


def test_loops_size_limits():
    with pytest.raises(SizeExceeded):
        gen_closed_loops(6, periodic=True)  # 72 edge pixels
    with pytest.raises(SizeExceeded):
        gen_closed_loops(5, periodic=False)  # 6x11 = 66 pixel layout


def test_loop_crossings():
    assert loop_vertical_cut_crossings(2) == 4
    assert loop_vertical_cut_crossings(3) == 6
    assert loop_vertical_cut_crossings(3, periodic=False) == 4


# --- random sets -----------------------------------------------------------


def test_random_set_deterministic(tmp_path):
    geom = make_geometry(4, 3)
    t1 = gen_random_set(geom, 64, seed=7)
    t2 = gen_random_set(geom, 64, seed=7)
    assert t1.label1 == t2.label1
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_task(t1, p1)
    save_task(t2, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert gen_random_set(geom, 64, seed=8).label1 != t1.label1


def test_random_set_distinct_and_in_range():
    geom = make_geometry(3, 3)
    task = gen_random_set(geom, 100, seed=1)
    assert len(task.label1) == 100
    assert all(0 <= w < 512 for w in task.label1)


def test_random_full_set_is_product_state():
    geom = make_geometry(2, 2)
    task = gen_random_set(geom, 16, seed=0)
    assert task.label1 == frozenset(range(16))
    part = parse_cut(geom, "cols<1")
    assert entanglement_entropy(task.indicator(), part).entropy_bits <= 1e-12


def test_random_majority_count_uses_complement():
    geom = make_geometry(3, 2)
    task = gen_random_set(geom, 61, seed=5)
    assert len(task.label1) == 61


def test_random_single_image_zero_entropy():
    geom = make_geometry(3, 2)
    task = gen_random_set(geom, 1, seed=3)
    part = parse_cut(geom, "cols<1")
    assert entanglement_entropy(task.indicator(), part).entropy_bits == 0.0


def test_random_count_exceeded():
    geom = make_geometry(2, 2)
    with pytest.raises(CountExceeded):
        gen_random_set(geom, 17, seed=0)


def test_random_matches_brute_force_entropy():
    geom = make_geometry(4, 3)
    task = gen_random_set(geom, 64, seed=7)
    f = task.indicator()
    part = parse_cut(geom, "cols<2")
    pa, pb = sorted(part.pixels_a), sorted(part.pixels_b)
    grid = np.zeros((1 << len(pa), 1 << len(pb)))
    for w, a in zip(f.words.tolist(), f.amps.tolist()):
        ia = sum(((w >> p) & 1) << j for j, p in enumerate(pa))
        ib = sum(((w >> p) & 1) << j for j, p in enumerate(pb))
        grid[ia, ib] = a
    lam = np.linalg.svd(grid, compute_uv=False) ** 2
    lam = lam[lam > 1e-12]
    oracle = float(-(lam * np.log2(lam)).sum())
    assert entanglement_entropy(f, part).entropy_bits == pytest.approx(oracle, abs=1e-9)


# --- parity ----------------------------------------------------------------


def test_parity_two_pixels():
    geom = make_geometry(2, 1)
    task = gen_parity(geom, even=True)
    assert task.label1 == frozenset({0b00, 0b11})


def test_parity_sizes_and_complement():
    geom = make_geometry(3, 2)
    even = gen_parity(geom, even=True)
    odd = gen_parity(geom, even=False)
    assert len(even.label1) == len(odd.label1) == 1 << 5
    assert even.label1 | odd.label1 == frozenset(range(64))
    assert not even.label1 & odd.label1


@pytest.mark.parametrize("shape", [(2, 2), (4, 2), (3, 3)])
@pytest.mark.parametrize("cut", ["cols<1", "rows<1"])
def test_parity_entropy_one_bit(shape, cut):
    geom = make_geometry(*shape)
    task = gen_parity(geom)
    part = parse_cut(geom, cut)
    rep = entanglement_entropy(task.indicator(), part)
    assert rep.entropy_bits == pytest.approx(1.0, abs=1e-9)
    assert rep.rank == 2


# --- Page reference --------------------------------------------------------


def test_page_one_one():
    assert page_reference_entropy(1, 1) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_page_empty_side():
    assert page_reference_entropy(0, 5) == 0.0
    assert page_reference_entropy(7, 0) == 0.0


def test_page_matches_direct_series():
    for n_a, n_b in [(1, 2), (2, 2), (2, 3), (3, 4)]:
        m = 1 << min(n_a, n_b)
        n = 1 << max(n_a, n_b)
        direct = math.fsum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2.0 * n)
        assert page_reference_entropy(n_a, n_b) == pytest.approx(direct, abs=1e-12)


def test_page_symmetric():
    assert page_reference_entropy(3, 7) == page_reference_entropy(7, 3)


def test_page_monte_carlo_five_five():
    # >= 200 Haar samples via normalized Gaussian matrices
    rng = np.random.default_rng(123)
    samples = 200
    total = 0.0
    for _ in range(samples):
        g = rng.normal(size=(32, 32))
        g /= linalg.norm(g)
        lam = np.linalg.svd(g, compute_uv=False) ** 2
        lam = lam[lam > 1e-15]
        total += float(-(lam * np.log(lam)).sum())
    mc = total / samples
    expected = page_reference_entropy(5, 5)
    assert abs(mc - expected) / expected <= 0.02


# --- task files ------------------------------------------------------------


def test_save_and_load_round_trip(tmp_path):
    task = gen_closed_loops(2, periodic=True)
    path = tmp_path / "loops.json"
    save_task(task, path)
    loaded = load_task(path)
    assert loaded.name == task.name
    assert loaded.geom == task.geom
    assert loaded.label1 == task.label1
    assert loaded.provenance["generator"] == "closed_loops"


def test_load_task_without_meta(tmp_path):
    geom = make_geometry(2, 2)
    path = tmp_path / "t.json"
    save_task_file(path, geom, {1, 2})
    loaded = load_task(path)
    assert loaded.label1 == frozenset({1, 2})
    assert loaded.name == str(path)
