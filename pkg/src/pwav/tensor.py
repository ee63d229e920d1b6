"""Transforms of 1-, 2- and 3-d arrays on tensor-product grids.

Two orderings are provided:

* separable: the complete 1-d transform along each axis in turn (last axis
  first), i.e. the Kronecker product of the 1-d transform matrices;
* Mallat: one level along every axis, then recurse into the low-pass block.

Both leave each axis in pyramid layout ``[alpha_0 | beta_0 | ... | beta_{J-1}]``
so a coefficient's position tells its per-axis level.  Axes may have
different depths; in the Mallat ordering an axis with fewer levels stops
being transformed once its levels run out, i.e. step ``s`` (finest first)
transforms axis ``a`` from level ``J_a - s`` to ``J_a - s - 1`` when
``s < J_a``.

Mallat subbands are identified by the step ``s`` and a bit mask over the
axes, bit ``a`` (``(mask >> a) & 1``) set meaning detail along axis ``a``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .basis import level_norms
from .grid import node_count, validate_input_length
from .lifting import TransformPlan, forward, forward_level, inverse_level, inverse_partial, make_plan
from .update import ProjectorKind

__all__ = [
    "Ordering",
    "TensorTransform",
    "forward_separable",
    "inverse_separable",
    "forward_mallat",
    "inverse_mallat",
]

MAX_DIMS = 3


class Ordering(enum.IntEnum):
    MALLAT = 0
    SEPARABLE = 1

    @classmethod
    def parse(cls, value) -> "Ordering":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls[value.strip().upper()]
            except KeyError:
                raise ValueError(f"unknown ordering {value!r}") from None
        return cls(int(value))


def _along(axis: int, arr: np.ndarray, fn):
    """Apply ``fn`` to the lines of ``arr`` along ``axis`` (moved last)."""
    out = fn(np.moveaxis(arr, axis, -1))
    return np.moveaxis(out, -1, axis)


@dataclass(frozen=True)
class Subband:
    step: int
    mask: int
    slices: tuple
    level: int


class TensorTransform:
    """Per-axis plans for one array shape, kind and order."""

    def __init__(self, shape, kind, q: int):
        shape = tuple(int(n) for n in shape)
        if not 1 <= len(shape) <= MAX_DIMS:
            raise ValueError(f"arrays must have 1 to {MAX_DIMS} dimensions, got {len(shape)}")
        self.shape = shape
        self.kind = ProjectorKind.parse(kind)
        self.q = q
        self.levels = tuple(validate_input_length(n, q) for n in shape)
        plans = {}
        for J in set(self.levels):
            plans[J] = make_plan(self.kind, q, J)
        self.plans = tuple(plans[J] for J in self.levels)

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    # ---- separable -------------------------------------------------------

    def forward_separable(self, data) -> np.ndarray:
        out = self._check(data)
        for axis in reversed(range(self.ndim)):
            plan = self.plans[axis]
            out = _along(axis, out, lambda x, p=plan: forward(p, x).to_vector())
        return out

    def inverse_separable(self, coeffs) -> np.ndarray:
        out = self._check(coeffs)
        for axis in range(self.ndim):
            plan = self.plans[axis]
            out = _along(axis, out, lambda c, p=plan: _inverse_vector(p, c))
        return out

    # ---- Mallat ----------------------------------------------------------

    def _block(self, step: int):
        """Extent of the low-pass block entering ``step`` along each axis."""
        return tuple(node_count(self.q, max(J - step, 0)) for J in self.levels)

    def forward_mallat(self, data) -> np.ndarray:
        out = self._check(data).copy()
        for step in range(max(self.levels)):
            block = tuple(slice(0, n) for n in self._block(step))
            sub = out[block]
            for axis in reversed(range(self.ndim)):
                if step >= self.levels[axis]:
                    continue
                ops = self.plans[axis].ops[self.levels[axis] - step - 1]
                sub = _along(axis, sub, lambda x, o=ops: np.concatenate(forward_level(o, x), axis=-1))
            out[block] = sub
        return out

    def inverse_mallat(self, coeffs) -> np.ndarray:
        out = self._check(coeffs).copy()
        for step in reversed(range(max(self.levels))):
            block = tuple(slice(0, n) for n in self._block(step))
            sub = out[block]
            for axis in range(self.ndim):
                if step >= self.levels[axis]:
                    continue
                ops = self.plans[axis].ops[self.levels[axis] - step - 1]
                nd = ops.idx.delta.size
                sub = _along(axis, sub, lambda c, o=ops, n=nd: inverse_level(o, c[..., :n], c[..., n:]))
            out[block] = sub
        return out

    def forward(self, data, ordering) -> np.ndarray:
        if Ordering.parse(ordering) is Ordering.MALLAT:
            return self.forward_mallat(data)
        return self.forward_separable(data)

    def inverse(self, coeffs, ordering) -> np.ndarray:
        if Ordering.parse(ordering) is Ordering.MALLAT:
            return self.inverse_mallat(coeffs)
        return self.inverse_separable(coeffs)

    # ---- coefficient bookkeeping ------------------------------------------

    def subbands(self):
        """Mallat subbands from coarsest to finest, masks ascending within a step."""
        bands = []
        for step in reversed(range(max(self.levels))):
            outer = self._block(step)
            inner = self._block(step + 1)
            active = [a for a in range(self.ndim) if step < self.levels[a]]
            for mask in range(1, 2**self.ndim):
                if any((mask >> a) & 1 for a in range(self.ndim) if a not in active):
                    continue
                sl = tuple(
                    slice(inner[a], outer[a]) if (mask >> a) & 1 else slice(0, inner[a])
                    for a in range(self.ndim)
                )
                bands.append(Subband(step, mask, sl, max(self.levels) - step - 1))
        return bands

    def coarse_slices(self):
        return tuple(slice(0, node_count(self.q, 0)) for _ in self.shape)

    @cached_property
    def mallat_order(self) -> np.ndarray:
        """Flat indices of the coefficient array in serialization order."""
        flat = np.arange(self.size).reshape(self.shape)
        parts = [flat[self.coarse_slices()].ravel()]
        parts += [flat[b.slices].ravel() for b in self.subbands()]
        return np.concatenate(parts)

    def pyramid_order(self, ordering) -> np.ndarray:
        if Ordering.parse(ordering) is Ordering.MALLAT:
            return self.mallat_order
        return np.arange(self.size)

    def _axis_levels(self, axis: int) -> np.ndarray:
        """Per-entry level along one axis in pyramid layout (-1 for alpha_0)."""
        sizes = self.plans[axis].hierarchy.pyramid_sizes
        return np.repeat(np.arange(-1, self.levels[axis]), sizes)

    def _axis_norms(self, axis: int) -> np.ndarray:
        """Basis norms along one axis in pyramid layout."""
        parts = [level_norms(self.kind, self.q, 0)[0]]
        parts += [level_norms(self.kind, self.q, j)[1] for j in range(self.levels[axis])]
        return np.concatenate(parts)

    @cached_property
    def coefficient_levels(self) -> np.ndarray:
        """Level tag per coefficient in array layout; -1 marks the coarsest block."""
        grids = np.meshgrid(*[self._axis_levels(a) for a in range(self.ndim)], indexing="ij")
        return np.max(np.stack(grids), axis=0)

    def coefficient_norms(self, ordering) -> np.ndarray:
        """L2 norm of the basis function paired with each coefficient."""
        ordering = Ordering.parse(ordering)
        if ordering is Ordering.SEPARABLE:
            out = np.ones(self.shape)
            for a in range(self.ndim):
                shape = [1] * self.ndim
                shape[a] = -1
                out = out * self._axis_norms(a).reshape(shape)
            return out
        out = np.empty(self.shape)
        coarse = [level_norms(self.kind, self.q, 0)[0]] * self.ndim
        out[self.coarse_slices()] = _outer(coarse)
        for band in self.subbands():
            vecs = []
            for a in range(self.ndim):
                j = self.levels[a] - band.step - 1
                if j < 0:
                    vecs.append(level_norms(self.kind, self.q, 0)[0])
                else:
                    phi, psi = level_norms(self.kind, self.q, j)
                    vecs.append(psi if (band.mask >> a) & 1 else phi)
            out[band.slices] = _outer(vecs)
        return out

    def mallat_levels(self) -> np.ndarray:
        out = np.full(self.shape, -1)
        for band in self.subbands():
            out[band.slices] = band.level
        return out

    def levels_of(self, ordering) -> np.ndarray:
        if Ordering.parse(ordering) is Ordering.MALLAT:
            return self.mallat_levels()
        return self.coefficient_levels

    def coarse_mask(self) -> np.ndarray:
        m = np.zeros(self.shape, dtype=bool)
        m[self.coarse_slices()] = True
        return m

    def _check(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.float64)
        if arr.shape != self.shape:
            raise ValueError(f"array shape {arr.shape} != transform shape {self.shape}")
        return arr


def _outer(vecs) -> np.ndarray:
    out = np.asarray(vecs[0])
    for v in vecs[1:]:
        out = np.multiply.outer(out, v)
    return out


def _inverse_vector(plan: TransformPlan, c: np.ndarray) -> np.ndarray:
    sizes = plan.hierarchy.pyramid_sizes
    parts = np.split(c, np.cumsum(sizes)[:-1], axis=-1)
    return inverse_partial(plan, parts[0], parts[1:])


def forward_separable(data, kind, q: int) -> np.ndarray:
    data = np.asarray(data, dtype=np.float64)
    return TensorTransform(data.shape, kind, q).forward_separable(data)


def inverse_separable(coeffs, kind, q: int) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return TensorTransform(coeffs.shape, kind, q).inverse_separable(coeffs)


def forward_mallat(data, kind, q: int) -> np.ndarray:
    data = np.asarray(data, dtype=np.float64)
    return TensorTransform(data.shape, kind, q).forward_mallat(data)


def inverse_mallat(coeffs, kind, q: int) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return TensorTransform(coeffs.shape, kind, q).inverse_mallat(coeffs)
