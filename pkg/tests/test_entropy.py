"""Spectral-path tests: dense, sparse, statevector, and naive oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entcut.entropy import (
    EIG_CUTOFF,
    check_property1,
    coefficient_matrix,
    entanglement_entropy,
    reduced_density_matrix,
    schmidt_spectrum_dense,
    schmidt_spectrum_sparse,
    schmidt_spectrum_statevector,
    von_neumann_entropy,
)
from entcut.errors import BadSpectrum, DenseCapExceeded, GramCapExceeded
from entcut.lattice import make_bipartition, make_geometry, parse_cut
from entcut.states import from_label1_set, product_function
from entcut.tasks import gen_parity, gen_random_set


def naive_entropy_bits(f, part):
    """Independent oracle: pure-python restriction, full grid, SVD."""
    pa, pb = sorted(part.pixels_a), sorted(part.pixels_b)
    grid = np.zeros((1 << len(pa), 1 << len(pb)))
    for w, a in zip(f.words.tolist(), f.amps.tolist()):
        ia = sum(((w >> p) & 1) << j for j, p in enumerate(pa))
        ib = sum(((w >> p) & 1) << j for j, p in enumerate(pb))
        grid[ia, ib] = a
    lam = np.linalg.svd(grid, compute_uv=False) ** 2
    lam = lam[lam > EIG_CUTOFF]
    return float(-(lam * np.log2(lam)).sum()), int(len(lam))


def test_entropy_values():
    assert von_neumann_entropy(np.array([1.0])) == 0.0
    assert von_neumann_entropy(np.array([0.5, 0.5])) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(np.array([0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-12)
    assert von_neumann_entropy(np.array([0.5, 0.5]), base="nats") == pytest.approx(
        math.log(2.0), abs=1e-12
    )


def test_bad_spectrum_rejected():
    with pytest.raises(BadSpectrum):
        von_neumann_entropy(np.array([0.5, 0.4]))


def test_rdm_parity_two_pixels():
    # even-parity images {00, 11} traced over one pixel: diag(1/2, 1/2)
    geom = make_geometry(1, 2)
    f = from_label1_set(geom, {0b00, 0b11})
    part = make_bipartition(geom, 0b01)
    rho = reduced_density_matrix(f, part)
    assert rho.dim == 2
    assert np.allclose(rho.entries, np.diag([0.5, 0.5]), atol=1e-15)


def test_rdm_single_image_projector():
    geom = make_geometry(2, 2)
    f = from_label1_set(geom, {0b0110})
    part = make_bipartition(geom, 0b0011)
    rho = reduced_density_matrix(f, part)
    assert np.trace(rho.entries) == pytest.approx(1.0, abs=1e-15)
    assert np.allclose(rho.entries @ rho.entries, rho.entries, atol=1e-14)
    assert np.linalg.matrix_rank(rho.entries) == 1


def test_rdm_product_is_rank_one():
    geom = make_geometry(2, 2)
    rng = np.random.default_rng(5)
    f = product_function(geom, rng.normal(size=4))
    part = make_bipartition(geom, 0b0101)
    rho = reduced_density_matrix(f, part)
    lam = np.linalg.eigvalsh(rho.entries)
    assert lam[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(lam[:-1] < 1e-12)


def test_rdm_cap():
    geom = make_geometry(8, 2)
    f = from_label1_set(geom, {0})
    part = make_bipartition(geom, (1 << 14) - 1)
    with pytest.raises(DenseCapExceeded):
        reduced_density_matrix(f, part, dense_cap=13)


def test_sparse_single_image():
    geom = make_geometry(2, 2)
    f = from_label1_set(geom, {0b1001})
    part = make_bipartition(geom, 0b0011)
    spec = schmidt_spectrum_sparse(f, part)
    assert spec.rank == 1
    assert spec.lambdas[0] == pytest.approx(1.0, abs=1e-12)


def test_sparse_parity_four_pixels():
    # 8 even-parity images on 2x2, balanced cut: brute-force 4x4
    # coefficient matrix has two equal singular values
    geom = make_geometry(2, 2)
    task = gen_parity(geom, even=True)
    assert len(task.label1) == 8
    f = task.indicator()
    part = make_bipartition(geom, 0b0011)
    expected_bits, expected_rank = naive_entropy_bits(f, part)
    spec = schmidt_spectrum_sparse(f, part)
    assert spec.rank == expected_rank == 2
    assert np.allclose(spec.lambdas[:2], [0.5, 0.5], atol=1e-12)
    assert von_neumann_entropy(spec) == pytest.approx(expected_bits, abs=1e-12)


def test_sparse_common_b_restriction_rank_one():
    # distinct A patterns, identical B pattern: coefficient matrix is a column
    geom = make_geometry(2, 2)
    images = {0b0001, 0b0010, 0b0011}  # pixels 0,1 in A; pixels 2,3 clear
    f = from_label1_set(geom, images)
    part = make_bipartition(geom, 0b0011)
    spec = schmidt_spectrum_sparse(f, part)
    assert spec.rank == 1


def test_sparse_gram_cap():
    geom = make_geometry(4, 3)
    task = gen_random_set(geom, 100, seed=2)
    part = make_bipartition(geom, 0b000000111111)
    with pytest.raises(GramCapExceeded):
        schmidt_spectrum_sparse(task.indicator(), part, gram_cap=4)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
@pytest.mark.parametrize("cut", ["cols<1", "cols<2", "rows<1", "mask:0x3a5"])
def test_three_paths_agree(seed, cut):
    geom = make_geometry(4, 3)
    task = gen_random_set(geom, 40 + 13 * seed, seed=seed)
    f = task.indicator()
    part = parse_cut(geom, cut)
    dense = schmidt_spectrum_dense(f, part)
    sparse = schmidt_spectrum_sparse(f, part)
    sv = schmidt_spectrum_statevector(f, part)
    s_dense = von_neumann_entropy(dense)
    s_sparse = von_neumann_entropy(sparse)
    s_sv = von_neumann_entropy(sv)
    assert s_dense == pytest.approx(s_sparse, abs=1e-9)
    assert s_dense == pytest.approx(s_sv, abs=1e-9)
    assert dense.rank == sparse.rank == sv.rank
    oracle_bits, oracle_rank = naive_entropy_bits(f, part)
    assert s_dense == pytest.approx(oracle_bits, abs=1e-9)
    assert dense.rank == oracle_rank


def test_dispatch_and_report_fields():
    geom = make_geometry(3, 2)
    f = from_label1_set(geom, {1, 2, 3})
    part = parse_cut(geom, "cols<1")
    rep = entanglement_entropy(f, part, cut_label="cols<1")
    assert rep.path == "sparse"  # support 3 < 2**2 rows
    assert rep.cut == "cols<1"
    assert rep.n_a == 2 and rep.n_b == 4
    dense_rep = entanglement_entropy(f, part, path="dense")
    assert dense_rep.path == "dense"
    assert dense_rep.entropy_bits == pytest.approx(rep.entropy_bits, abs=1e-12)
    full = product_function(geom, np.zeros(6))
    assert entanglement_entropy(full, part).path == "dense"


def test_report_serialization_units():
    geom = make_geometry(2, 2)
    task = gen_parity(geom)
    part = parse_cut(geom, "cols<1")
    rep = entanglement_entropy(task.indicator(), part)
    doc_bits = rep.to_dict("bits")
    doc_nats = rep.to_dict("nats")
    assert doc_bits["entropy_bits"] == pytest.approx(1.0, abs=1e-12)
    assert doc_nats["entropy_nats"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert "entropy_bits" not in doc_nats
    assert len(doc_bits["lambdas"]) <= 32


def test_rank_bounds():
    geom = make_geometry(4, 3)
    task = gen_random_set(geom, 23, seed=9)
    f = task.indicator()
    for cut in ("cols<2", "rows<1", "mask:0x0f3"):
        part = parse_cut(geom, cut)
        spec = schmidt_spectrum_sparse(f, part)
        assert spec.rank <= min(1 << part.n_a, 1 << part.n_b)
        assert spec.rank <= f.support_size  # indicator rank capped by N_I
        s = von_neumann_entropy(spec)
        assert s <= math.log2(max(spec.rank, 1)) + 1e-9
        assert s <= min(part.n_a, part.n_b) + 1e-9


def test_property1_parity_and_singleton():
    geom = make_geometry(3, 3)
    task = gen_parity(geom)
    part = parse_cut(geom, "cols<1")
    res = check_property1(task.indicator(), part)
    assert res.passed and res.delta_bits < 1e-9
    single = from_label1_set(geom, {17})
    res2 = check_property1(single, part)
    assert res2.passed
    assert res2.s_a_bits == pytest.approx(0.0, abs=1e-12)
    assert res2.s_b_bits == pytest.approx(0.0, abs=1e-12)


def test_property1_random_cut_sweep():
    geom = make_geometry(4, 3)
    task = gen_random_set(geom, 20, seed=4)
    f = task.indicator()
    rng = np.random.default_rng(8)
    full = geom.full_mask()
    for _ in range(10):
        mask = int(rng.integers(1, full, dtype=np.uint64))
        part = make_bipartition(geom, mask)
        res = check_property1(f, part)
        assert res.passed, (mask, res)
        # both-path cross-check on the same cut
        assert von_neumann_entropy(schmidt_spectrum_dense(f, part)) == pytest.approx(
            von_neumann_entropy(schmidt_spectrum_sparse(f, part)), abs=1e-9
        )


def test_gram_row_permutation_leaves_spectrum():
    geom = make_geometry(4, 3)
    task = gen_random_set(geom, 30, seed=6)
    f = task.indicator()
    part = parse_cut(geom, "cols<2")
    c, _, _ = coefficient_matrix(f, part)
    rng = np.random.default_rng(0)
    perm = rng.permutation(c.shape[0])
    base = np.sort(np.linalg.eigvalsh(c @ c.T))
    permuted = np.sort(np.linalg.eigvalsh(c[perm] @ c[perm].T))
    assert np.allclose(base, permuted, atol=1e-12)


def test_unpartitioned_state_is_pure():
    # the full projector of any normalized function has spectrum {1}
    geom = make_geometry(3, 2)
    task = gen_random_set(geom, 11, seed=3)
    amps = task.indicator().amps
    singular = np.linalg.svd(amps.reshape(1, -1), compute_uv=False)
    assert singular[0] == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    images=st.sets(st.integers(min_value=0, max_value=63), min_size=1, max_size=30),
    mask=st.integers(min_value=1, max_value=62),
)
def test_entropy_invariants_property(images, mask):
    geom = make_geometry(3, 2)
    f = from_label1_set(geom, images)
    part = make_bipartition(geom, mask)
    spec = schmidt_spectrum_sparse(f, part)
    s = von_neumann_entropy(spec)
    assert 0.0 <= s <= math.log2(max(spec.rank, 1)) + 1e-9
    assert s <= min(part.n_a, part.n_b) + 1e-9
    assert spec.rank <= len(images)
    res = check_property1(f, part)
    assert res.passed


def test_trace_and_psd_invariants():
    geom = make_geometry(4, 3)
    for seed in range(3):
        task = gen_random_set(geom, 50, seed=seed)
        f = task.indicator()
        for cut in ("cols<1", "cols<3", "rows<2"):
            part = parse_cut(geom, cut)
            rho = reduced_density_matrix(f, part).entries
            assert abs(np.trace(rho) - 1.0) <= 1e-12
            assert np.abs(rho - rho.T).max() <= 1e-12
            assert np.linalg.eigvalsh(rho).min() >= -1e-10
