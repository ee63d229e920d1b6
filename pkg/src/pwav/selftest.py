"""Quick built-in checks run by ``pwav selftest``.

These are a fast subset of the acceptance criteria that need nothing beyond
the package itself; the full suite with independent oracles lives in the
test directory of the source tree.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .basis import cascade_primal, level_norms
from .codec import CodecConfig, CompressedBlob, Encoder, compress, decompress
from .gram import element_gram
from .lifting import composite_matrix, make_plan
from .predictor import stencil, stencil_oracle
from .tensor import TensorTransform
from .update import ProjectorKind


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _reconstruction():
    rng = np.random.default_rng(1)
    worst = 0.0
    for kind in ProjectorKind:
        for q in (0, 1, 2, 3, 4, 6):
            for shape in [(q * 2**5 + 1 if q else 32,), (q * 4 + 1 if q else 8,) * 2]:
                x = rng.standard_normal(shape)
                tt = TensorTransform(shape, kind, q)
                for ordering in ("mallat", "separable"):
                    y = tt.inverse(tt.forward(x, ordering), ordering)
                    worst = max(worst, np.abs(y - x).max() / np.abs(x).max())
    return worst <= 1e-12, f"max rel err {worst:.2e}"


def _stencils():
    err = max(np.abs(stencil(q) - stencil_oracle(q)).max() for q in range(9))
    exact = stencil(0).tolist() == [[1.0]] and stencil(1).tolist() == [[0.5, 0.5]]
    return err <= 1e-12 and exact, f"max err {err:.2e}"


def _haar_gram():
    g = element_gram(0, 0.25)
    return g.gdd.tolist() == [[0.5]] and g.gdn.tolist() == [[0.25]], "q=0 blocks [2h], [h]"


def _haar_orthogonal():
    J = 5
    plan = make_plan("cg", 0, J)
    m, _ = composite_matrix(plan)
    norms = [level_norms(ProjectorKind.CG, 0, 0)[0]]
    norms += [level_norms(ProjectorKind.CG, 0, j)[1] for j in range(J)]
    w = np.concatenate(norms)
    # nodal level-J functions have squared norm 2**-J
    scaled = (m * w[:, None]) * 2.0 ** (J / 2)
    dev = np.abs(scaled @ scaled.T - np.eye(len(w))).max()
    return dev <= 1e-12, f"Gramian deviation {dev:.2e}"


def _vanishing():
    worst = 0.0
    for kind in ProjectorKind:
        for q in (1, 2, 3, 4):
            x = np.linspace(0, 1, q * 2**6 + 1)
            f = np.polyval(np.arange(1.0, q + 2), x)
            tt = TensorTransform(f.shape, kind, q)
            c = tt.forward(f, "separable")
            worst = max(worst, np.abs(c[q + 1 :]).max() / np.abs(f).max())
    return worst <= 1e-11, f"max detail {worst:.2e}"


def _support():
    plan = make_plan("dg", 2, 6)
    _, psi = cascade_primal(plan, 2)
    k = 3
    x = np.arange(psi.shape[1]) / (psi.shape[1] - 1)
    e = k // 2
    outside = (x < (e - 1) / 4) | (x > (e + 2) / 4)
    return bool(np.all(psi[k, outside] == 0.0)), "DG wavelet vanishes off neighbours"


def _blob():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((9, 17))
    blob, _ = compress(x, CodecConfig(q=2, kind="dg", threshold=0.05))
    raw = blob.to_bytes()
    same = CompressedBlob.from_bytes(raw).to_bytes() == raw
    again = np.array_equal(decompress(raw), decompress(raw))
    return same and again, f"{len(raw)} bytes"


def _haar_codec():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(2**12)
    enc = Encoder(x, CodecConfig(q=0, kind="cg"))
    tau = float(np.median(enc.magnitude))
    keep = enc.keep_mask(tau)
    err2 = enc.report(tau, keep).l2_error ** 2
    dropped = float(np.sum(enc.magnitude[~keep] ** 2))
    return abs(err2 - dropped) <= 1e-12, f"|diff| {abs(err2 - dropped):.2e}"


CHECKS = [
    ("perfect reconstruction", _reconstruction),
    ("stencil closed form", _stencils),
    ("Haar Gram blocks", _haar_gram),
    ("Haar orthogonality", _haar_orthogonal),
    ("vanishing moments", _vanishing),
    ("DG compact support", _support),
    ("codec Haar error identity", _haar_codec),
    ("blob round trip", _blob),
]


def run_checks():
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed selftest
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), f"{detail} ({time.perf_counter() - t0:.2f}s)"))
    return results
