import numpy as np
import pytest
from oracles import exact_stencil

from pwav.predictor import (
    OrderTooLarge,
    apply_predict,
    assemble_predictor,
    stencil,
    stencil_closed_form,
    stencil_oracle,
)


@pytest.mark.parametrize("q", range(9))
def test_closed_form_matches_oracle(q):
    assert np.abs(stencil_closed_form(q) - stencil_oracle(q)).max() <= 1e-12
    if q:
        assert np.abs(stencil_closed_form(q) - exact_stencil(q)).max() <= 1e-12


def test_low_orders_exact():
    assert stencil(0).tolist() == [[1.0]]
    assert stencil(1).tolist() == [[0.5, 0.5]]
    assert np.allclose(stencil(2), [[3 / 8, 3 / 4, -1 / 8], [-1 / 8, 3 / 4, 3 / 8]])


@pytest.mark.parametrize("q", range(1, 9))
def test_rows_sum_to_one(q):
    assert np.allclose(stencil(q).sum(axis=1), 1.0, atol=1e-12)


def test_stencil_read_only_and_bounds():
    with pytest.raises(ValueError):
        stencil(3)[0, 0] = 1.0
    with pytest.raises(OrderTooLarge):
        stencil_closed_form(40)
    with pytest.raises(ValueError):
        stencil_closed_form(-1)


def test_two_element_linear_predictor():
    assert assemble_predictor(1, 1).tolist() == [[0.5, 0.5, 0], [0, 0.5, 0.5]]


@pytest.mark.parametrize("q,j", [(1, 3), (2, 2), (3, 3), (6, 1)])
def test_matrix_free_matches_assembled(q, j):
    rng = np.random.default_rng(q * 10 + j)
    coarse = rng.standard_normal((3, q * 2**j + 1))
    assert np.allclose(apply_predict(q, coarse), coarse @ assemble_predictor(q, j).T, atol=1e-13)


@pytest.mark.parametrize("q", [1, 2, 4, 6])
def test_predicts_polynomials_exactly(q):
    xc = np.linspace(0, 1, q * 4 + 1)
    xf = np.linspace(0, 1, q * 8 + 1)[1::2]
    p = np.polynomial.Polynomial(np.arange(1.0, q + 2))
    assert np.allclose(apply_predict(q, p(xc)), p(xf), atol=1e-12)


def test_haar_prediction_copies():
    c = np.array([1.0, 2.0])
    out = apply_predict(0, c)
    assert out.tolist() == [1.0, 2.0] and out is not c
