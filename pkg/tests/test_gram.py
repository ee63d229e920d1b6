import numpy as np
import pytest
from oracles import composite_gauss, gram_blocks, nodal_basis_values

from pwav.gram import (
    assemble_global_gram_dd,
    assemble_global_gram_dd_dense,
    assemble_global_gram_dn,
    element_gram,
    lagrange_eval,
    newton_cotes_weights,
)


@pytest.mark.parametrize("q", range(1, 9))
def test_element_blocks_match_quadrature_oracle(q):
    gdd, gdn = gram_blocks(q, 0)
    eg = element_gram(q, 1.0 / (2 * q))
    assert np.abs(eg.gdd - gdd).max() <= 1e-12
    assert np.abs(eg.gdn - gdn).max() <= 1e-12


def test_haar_blocks_exact():
    h = 0.125
    eg = element_gram(0, h)
    assert eg.gdd.tolist() == [[2 * h]]
    assert eg.gdn.tolist() == [[h]]


def test_haar_blocks_match_oracle():
    gdd, gdn = gram_blocks(0, 0)
    assert np.allclose(element_gram(0, 0.5).gdd, gdd, atol=1e-12)
    # the surplus function of the first Haar refinement is the right half
    x, w = composite_gauss(16, 16)
    right = (x >= 0.5).astype(float)
    assert np.isclose(np.sum(w * right), element_gram(0, 0.5).gdn[0, 0], atol=1e-12)


def test_linear_blocks():
    eg = element_gram(1, 0.5)
    assert np.allclose(eg.gdd, [[1 / 3, 1 / 6], [1 / 6, 1 / 3]], atol=1e-15)
    assert np.allclose(eg.gdn, [[0.25], [0.25]], atol=1e-15)


@pytest.mark.parametrize("q,j", [(0, 3), (1, 2), (2, 3), (3, 2), (5, 1), (8, 1)])
def test_global_matrices_match_oracle(q, j):
    gdd, gdn = gram_blocks(q, j)
    band = assemble_global_gram_dd(q, j)
    assert np.abs(band.to_dense() - gdd).max() <= 1e-12
    assert np.abs(assemble_global_gram_dd_dense(q, j) - gdd).max() <= 1e-12
    assert np.abs(assemble_global_gram_dn(q, j) - gdn).max() <= 1e-12
    assert band.bandwidth == q


@pytest.mark.parametrize("q", range(1, 9))
def test_gram_rows_integrate_basis(q):
    # rows of G_dd sum to the integral of each coarse nodal function
    eg = element_gram(q, 0.5 / q)
    x, w = composite_gauss(64, 16)
    phi = nodal_basis_values(q, 0, x)
    assert np.allclose(eg.gdd.sum(axis=1), phi @ w, atol=1e-12)


def test_newton_cotes():
    assert np.allclose(newton_cotes_weights(1), [0.5, 0.5])
    assert np.allclose(45 * newton_cotes_weights(4), [14, 64, 24, 64, 14])
    for n in range(1, 9):
        assert np.isclose(newton_cotes_weights(n).sum(), n)
    with pytest.raises(ValueError):
        newton_cotes_weights(9)


def test_lagrange_partition_of_unity():
    x = np.linspace(-1, 3, 17)
    vals = lagrange_eval(np.array([0.0, 1.0, 2.5]), x)
    assert vals.shape == (3, 17)
    assert np.allclose(vals.sum(axis=0), 1.0)
