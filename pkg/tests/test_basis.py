import numpy as np
import pytest
from oracles import composite_gauss, evaluate_nodal

from pwav.basis import (
    basis_norms,
    cascade_dual,
    cascade_primal,
    function_norms,
    level_norms,
    scaling_epsilon,
    support_interval,
)
from pwav.gram import level_mass_matrix
from pwav.grid import GridHierarchy
from pwav.lifting import make_plan
from pwav.update import ProjectorKind


def _oracle_norms(rows, q, J):
    x, w = composite_gauss(2**J, 16)
    if q == 0:
        x = np.clip(x, 0, 1 - 1e-15)
    return np.sqrt([np.sum(w * evaluate_nodal(r, q, x) ** 2) for r in rows])


def test_haar_psi_step():
    _, psi = cascade_primal(make_plan("cg", 0, 3), 1)
    assert psi[0].tolist() == [-0.5, -0.5, 0.5, 0.5, 0, 0, 0, 0]
    assert psi[1].tolist() == [0, 0, 0, 0, -0.5, -0.5, 0.5, 0.5]


@pytest.mark.parametrize("q", [1, 2, 3])
def test_interp_psi_is_fine_nodal_function(q):
    j, J = 1, 4
    _, psi = cascade_primal(make_plan("interp", q, J), j)
    x = GridHierarchy(q, J).coordinates(J)
    fine = np.eye(GridHierarchy(q, j + 1).nodes(j + 1))[1::2]
    for k, row in enumerate(fine):
        assert np.allclose(psi[k], evaluate_nodal(row, q, x), atol=1e-14)


@pytest.mark.parametrize("kind", ["interp", "cg", "dg"])
@pytest.mark.parametrize("q", [0, 1, 2, 3, 5])
def test_norms_match_quadrature_oracle(kind, q):
    plan = make_plan(kind, q, 4)
    for j in (0, 2):
        phi, psi = cascade_primal(plan, j)
        nphi, npsi = basis_norms(plan, j)
        assert np.allclose(nphi, _oracle_norms(phi, q, 4), rtol=1e-12, atol=0)
        assert np.allclose(npsi, _oracle_norms(psi, q, 4), rtol=1e-12, atol=0)


@pytest.mark.parametrize("j", [0, 1, 4])
def test_haar_norms(j):
    phi, psi = level_norms(ProjectorKind.DG, 0, j)
    assert np.allclose(phi**2, 2.0**-j, rtol=1e-13)
    assert np.allclose(psi**2, 2.0 ** -(j + 2), rtol=1e-13)


def test_linear_interp_wavelet_norm():
    # the fine hat of half-width 2^-(j+1) has squared norm 2^-j / 3
    _, psi = level_norms(ProjectorKind.INTERP, 1, 3)
    assert np.allclose(psi**2, 2.0**-3 / 3, rtol=1e-13)


def test_level_norms_cached_read_only():
    a = level_norms(ProjectorKind.CG, 2, 2)
    assert a is level_norms(ProjectorKind.CG, 2, 2)
    with pytest.raises(ValueError):
        a[0][0] = 1.0


def test_function_norms_constant():
    assert np.allclose(function_norms(np.ones(9), 2, 2), 1.0)
    assert np.allclose(function_norms(np.full(8, 2.0), 0, 3), 2.0)


@pytest.mark.parametrize("q", [0, 1, 2, 4])
def test_epsilon_integrates_nodal_functions(q):
    eps = scaling_epsilon(q, 3)
    assert np.isclose(eps.sum(), 1.0)
    x, w = composite_gauss(64, 16)
    n = eps.size
    ref = [np.sum(w * evaluate_nodal(np.eye(n)[p], q, np.clip(x, 0, 1 - 1e-15))) for p in range(n)]
    assert np.allclose(eps, ref, atol=1e-13)


@pytest.mark.parametrize("kind", ["cg", "dg", "interp"])
@pytest.mark.parametrize("q", [0, 1, 2])
def test_dual_biorthogonal_under_lumped_pairing(kind, q):
    J, j = 5, 2
    plan = make_plan(kind, q, J)
    phi, psi = cascade_primal(plan, j)
    dphi, dpsi = cascade_dual(plan, j)
    eps = scaling_epsilon(q, J)
    prim = np.vstack([phi, psi])
    dual = np.vstack([dphi, dpsi])
    assert np.abs((dual * eps) @ prim.T - np.eye(len(prim))).max() <= 1e-12


@pytest.mark.parametrize("kind", ["cg", "dg"])
@pytest.mark.parametrize("q", [1, 2])
def test_dual_biorthogonal_in_l2(kind, q):
    j, J = 1, 9
    plan = make_plan(kind, q, J)
    phi, psi = cascade_primal(plan, j)
    dphi, dpsi = cascade_dual(plan, j)
    mass = level_mass_matrix(q, J)
    prim = np.vstack([phi, psi])
    dual = np.vstack([dphi, dpsi])
    pairing = dual @ mass.matvec(prim.T)
    assert np.abs(pairing - np.eye(len(prim))).max() <= 1e-3


@pytest.mark.parametrize("q", [1, 2, 3])
def test_dg_wavelets_compactly_supported(q):
    J, j = 7, 2
    _, psi = cascade_primal(make_plan("dg", q, J), j)
    x = GridHierarchy(q, J).coordinates(J)
    for k in range(psi.shape[0]):
        lo, hi = support_interval(q, j, k)
        outside = (x < lo) | (x > hi)
        assert np.all(psi[k, outside] == 0.0)


def test_support_interval_clipped():
    assert support_interval(1, 2, 0) == (0.0, 0.5)
    assert support_interval(1, 2, 3) == (0.5, 1.0)
    assert support_interval(2, 1, 1) == (0.0, 1.0)
