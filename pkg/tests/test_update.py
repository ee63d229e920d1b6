import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwav.update import (
    CGUpdate,
    DGUpdate,
    HaarUpdate,
    ProjectorKind,
    ZeroUpdate,
    build_update,
    cg_update_dense_oracle,
    element_update,
    iter_cg_update_columns,
)


def test_kind_parsing():
    assert ProjectorKind.parse("cg") is ProjectorKind.CG
    assert ProjectorKind.parse("Interpolation") is ProjectorKind.INTERP
    assert ProjectorKind.parse(2) is ProjectorKind.DG
    with pytest.raises(ValueError):
        ProjectorKind.parse("spline")


def test_dispatch():
    assert isinstance(build_update("interp", 2, 1), ZeroUpdate)
    assert isinstance(build_update("cg", 0, 1), HaarUpdate)
    assert isinstance(build_update("dg", 0, 1), HaarUpdate)
    assert isinstance(build_update("dg", 2, 1), DGUpdate)
    assert isinstance(build_update("cg", 2, 1), CGUpdate)


@pytest.mark.parametrize("kind", ["cg", "dg"])
def test_haar_update_is_half_identity(kind):
    assert np.array_equal(build_update(kind, 0, 3).to_dense(), 0.5 * np.eye(8))


def test_interp_update_zero():
    u = build_update("interp", 3, 2)
    assert u.to_dense().shape == (13, 12)
    assert not u.to_dense().any()


def test_linear_dg_level_one():
    assert np.allclose(DGUpdate(1, 1).to_dense(), [[0.5, 0], [0.25, 0.25], [0, 0.5]], atol=1e-15)


@pytest.mark.parametrize("q", range(1, 7))
def test_element_update_solves_local_system(q):
    from pwav.gram import element_gram

    eg = element_gram(q, 0.1)
    assert np.allclose(eg.gdd @ element_update(q), eg.gdn, atol=1e-12)


@pytest.mark.parametrize("q,j", [(1, 0), (1, 3), (2, 2), (3, 3), (4, 1), (6, 2)])
def test_dg_matrix_free_matches_stacking(q, j):
    u = DGUpdate(q, j)
    assert np.abs(u.to_dense() - u.dense_by_stacking()).max() <= 1e-14


@pytest.mark.parametrize("q,j", [(1, 0), (1, 4), (2, 3), (3, 2), (4, 3), (6, 1)])
def test_cg_matches_dense_oracle(q, j):
    u = CGUpdate(q, j)
    assert np.abs(u.to_dense() - cg_update_dense_oracle(q, j)).max() <= 1e-12


def test_cg_streamed_columns():
    q, j = 2, 4
    dense = cg_update_dense_oracle(q, j)
    got = np.zeros_like(dense)
    for start, cols in iter_cg_update_columns(q, j, chunk=7):
        got[:, start : start + cols.shape[1]] = cols
    assert np.allclose(got, dense, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["cg", "dg"]), st.integers(1, 4), st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_apply_batched_equals_dense(kind, q, j, seed):
    u = build_update(kind, q, j)
    beta = np.random.default_rng(seed).standard_normal((2, 3, u.shape[1]))
    assert np.allclose(u.apply(beta), beta @ u.to_dense().T, atol=1e-12)


def test_cg_update_global_support():
    u = CGUpdate(1, 4).to_dense()
    assert np.all(np.abs(u) > 1e-12)
