"""Independent reference computations used only by the tests.

Nothing here calls the lifting engine; functions are evaluated pointwise
from nodal values and integrated with composite Gauss-Legendre rules.
"""

import numpy as np


def lagrange_basis(nodes, x):
    nodes = np.asarray(nodes, float)
    out = np.ones((len(nodes), len(x)))
    for n in range(len(nodes)):
        for k in range(len(nodes)):
            if k != n:
                out[n] *= (x - nodes[k]) / (nodes[n] - nodes[k])
    return out


def evaluate_nodal(values, q, x):
    """Evaluate the piecewise polynomial with nodal ``values`` on [0, 1] at ``x``.

    ``x`` should avoid element boundaries for q = 0 (right-continuous steps).
    """
    values = np.asarray(values, float)
    if q == 0:
        n = len(values)
        idx = np.minimum((x * n).astype(int), n - 1)
        return values[idx]
    ne = (len(values) - 1) // q
    e = np.minimum((x * ne).astype(int), ne - 1)
    out = np.zeros_like(x)
    local = q * (x * ne - e)
    for k in range(q + 1):
        lk = np.ones_like(x)
        for m in range(q + 1):
            if m != k:
                lk *= (local - m) / (k - m)
        out += values[e * q + k] * lk
    return out


def composite_gauss(n_panels, npts=12):
    t, w = np.polynomial.legendre.leggauss(npts)
    edges = np.arange(n_panels) / n_panels
    h = 1.0 / n_panels
    x = (edges[:, None] + h * (t[None, :] + 1) / 2).ravel()
    wx = np.tile(w * h / 2, n_panels)
    return x, wx


def l2_inner(f_vals, g_vals, q_f, q_g, n_panels, npts=12):
    x, w = composite_gauss(n_panels, npts)
    return np.sum(w * evaluate_nodal(f_vals, q_f, x) * evaluate_nodal(g_vals, q_g, x))


def nodal_basis_values(q, j, x):
    """Matrix of all level-j nodal basis functions evaluated at x."""
    n = 2**j if q == 0 else q * 2**j + 1
    return np.array([evaluate_nodal(np.eye(n)[k], q, x) for k in range(n)])


def cg_projection(fine_values, q, J, j):
    """L2-orthogonal projection of a level-J function onto V_j, nodal values."""
    x, w = composite_gauss(2**J * 2, max(q + 2, 4))
    f = evaluate_nodal(fine_values, q, x)
    phi = nodal_basis_values(q, j, x)
    gram = (phi * w) @ phi.T
    rhs = (phi * w) @ f
    return np.linalg.solve(gram, rhs)


def dg_projection(fine_values, q, J, j):
    """Element-wise L2 projection onto degree-q polynomials, averaged at shared nodes."""
    ne = 2**j
    t, wt = np.polynomial.legendre.leggauss(max(q + 2, 4))
    sub = 2 ** (J - j) * 2
    out = np.zeros(q * ne + 1)
    count = np.zeros(q * ne + 1)
    for e in range(ne):
        a, b = e / ne, (e + 1) / ne
        edges = a + (b - a) * np.arange(sub) / sub
        hh = (b - a) / sub
        x = (edges[:, None] + hh * (t[None, :] + 1) / 2).ravel()
        w = np.tile(wt * hh / 2, sub)
        f = evaluate_nodal(fine_values, q, x)
        nodes = a + (b - a) * np.arange(q + 1) / q
        phi = lagrange_basis(nodes, x)
        loc = np.linalg.solve((phi * w) @ phi.T, (phi * w) @ f)
        out[e * q : e * q + q + 1] += loc
        count[e * q : e * q + q + 1] += 1
    return out / count


def exact_stencil(q):
    """Lagrange prediction weights in exact rational arithmetic."""
    from fractions import Fraction

    if q == 0:
        return np.ones((1, 1))
    coarse = [2 * n for n in range(q + 1)]
    rows = []
    for m in range(q):
        x = 2 * m + 1
        row = []
        for n, c in enumerate(coarse):
            w = Fraction(1)
            for k, o in enumerate(coarse):
                if k != n:
                    w *= Fraction(x - o, c - o)
            row.append(float(w))
        rows.append(row)
    return np.array(rows)


def gram_blocks(q, j):
    """Level-j Gram blocks (coarse/coarse, coarse/surplus) by brute-force quadrature."""
    x, w = composite_gauss(2 ** (j + 1) * 8, 16)
    coarse = nodal_basis_values(q, j, x)
    fine = nodal_basis_values(q, j + 1, x)
    return (coarse * w) @ coarse.T, (coarse * w) @ fine[1::2].T


def dg_level_projection(fine_values, q, J, j):
    """DG coarse values built level by level, each step an averaged element projection."""
    if q == 0:
        out = np.asarray(fine_values, float)
        for _ in range(J - j):
            out = 0.5 * (out[0::2] + out[1::2])
        return out
    out = np.asarray(fine_values, float)
    for level in range(J - 1, j - 1, -1):
        out = dg_projection(out, q, level + 1, level)
    return out
