"""Hamiltonian assembly, symmetry and sector-structure tests."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spinring import (
    BudgetError,
    ModelParams,
    build_full,
    build_sector,
    sector_basis,
    total_sz_operator,
    translation_operator,
)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(2, -1.0, 0.0)  # ring of 2 double-counts its bond
    with pytest.raises(ValueError):
        ModelParams(4, -1.0, 0.0, b_perp=-0.1)
    with pytest.raises(ValueError):
        ModelParams(4, float("inf"), 0.0)
    with pytest.raises(ValueError):
        ModelParams(4, -1.0, 0.0, boundary="open")
    assert ModelParams.xx(5, -1.0).is_xx
    assert not ModelParams(5, -1.0, 0.5).is_xx


def test_full_basis_budget():
    with pytest.raises(BudgetError):
        build_full(ModelParams(15, -1.0, 0.0))


def test_heisenberg_three_ring_spectrum():
    # Delta = 0, B = 0: two four-fold levels at +-3J.
    h = build_full(ModelParams(3, -1.0, 0.0)).entries
    w = np.linalg.eigvalsh(h)
    assert_allclose(w, [-3, -3, -3, -3, 3, 3, 3, 3], atol=1e-12)


def test_all_up_diagonal_entry():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(3, 9))
        j, d, b = rng.normal(size=3)
        h = build_full(ModelParams(n, j, d, b)).entries
        assert_allclose(h[0, 0], n * (j + d) - n * b, rtol=1e-13)


def test_trace_zero():
    # exact for integer couplings, near machine zero otherwise
    h = build_full(ModelParams(5, -1.0, 1.0, 2.0, 1.0)).entries
    assert np.trace(h) == 0.0
    rng = np.random.default_rng(4)
    for _ in range(5):
        n = int(rng.integers(3, 8))
        j, d, b, bp = rng.normal(size=4)
        h = build_full(ModelParams(n, j, d, b, abs(bp))).entries
        assert abs(np.trace(h)) <= 1e-10 * (1 << n)


def test_entries_real_symmetric():
    h = build_full(ModelParams(5, -0.7, 0.3, 1.1, 0.2)).entries
    assert h.dtype == np.float64
    assert np.array_equal(h, h.T)


def test_sector_matrix_three_sites():
    # J=-1, Delta=1, B=0: (J+Delta)=0 kills the diagonal, hopping is 2J=-2.
    h = build_sector(ModelParams(3, -1.0, 1.0), 1).entries
    expected = -2.0 * (np.ones((3, 3)) - np.eye(3))
    assert np.array_equal(h, expected)
    assert_allclose(np.linalg.eigvalsh(h), [-4, 2, 2], atol=1e-12)


def test_sector_zero_is_scalar():
    params = ModelParams(4, -1.0, 0.5, 1.3)
    h = build_sector(params, 0).entries
    assert h.shape == (1, 1)
    assert_allclose(h[0, 0], 4 * (params.j_xy + params.delta) - 4 * params.b_field)
    xx = ModelParams.xx(6, -1.0, 2.0)
    assert build_sector(xx, 0).entries[0, 0] == -6 * 2.0


def test_sector_blocks_tile_the_full_matrix():
    params = ModelParams(6, -0.8, 0.4, 0.9)
    full = build_full(params).entries
    seen = 0
    for m in range(7):
        members = list(sector_basis(6, m).members)
        block = full[np.ix_(members, members)]
        assert np.array_equal(block, build_sector(params, m).entries)
        seen += len(members)
        # everything off the same-weight blocks vanishes when b_perp = 0
        others = [s for s in range(64) if s not in members]
        assert np.all(full[np.ix_(members, others)] == 0.0)
    assert seen == 64


def test_sector_requires_no_transverse_term():
    with pytest.raises(ValueError):
        build_sector(ModelParams(4, -1.0, 1.0, b_perp=0.1), 1)


def test_transverse_term_connects_neighbor_sectors():
    bp = 0.37
    params = ModelParams(4, -1.0, 0.2, 0.5, bp)
    h = build_full(params).entries
    for s in range(16):
        for t in range(16):
            dw = abs(s.bit_count() - t.bit_count())
            if s != t and h[s, t] != 0.0 and dw != 0:
                assert dw == 1
                assert h[s, t] == bp


def test_total_sz():
    op = total_sz_operator(3).entries
    assert np.array_equal(np.diag(op), [-3, -1, -1, 1, -1, 1, 1, 3])
    params = ModelParams(5, -1.0, 0.7, 1.2)
    h = build_full(params).entries
    d = total_sz_operator(5).entries
    assert np.array_equal(h @ d, d @ h)  # exact commutation when b_perp = 0


def test_translation_symmetry():
    t = translation_operator(5).entries
    assert np.array_equal(t @ t.T, np.eye(32))  # permutation, orthogonal
    h = build_full(ModelParams(5, -0.6, 0.9, 1.4, 0.3)).entries
    assert np.array_equal(h @ t, t @ h)


def test_spin_flip_maps_field_sign():
    params = ModelParams(4, -1.0, 0.8, 1.3)
    h_plus = build_full(params).entries
    h_minus = build_full(ModelParams(4, -1.0, 0.8, -1.3)).entries
    flip = np.array([15 - s for s in range(16)])
    assert np.array_equal(h_plus[np.ix_(flip, flip)], h_minus)
