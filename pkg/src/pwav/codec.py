"""Threshold coding of coefficient pyramids and rate-distortion reporting.

A coefficient is kept when its weighted magnitude reaches the threshold;
the coarsest nodal block is always kept.  Weights are

* ``raw``: 1;
* ``l2``: the L2 norm of the paired basis function;
* ``sobolev``: that norm times ``2**(s * level)``.

The compression ratio is the fraction of coefficients kept.  Errors are
measured on the reconstructed piecewise polynomial over the unit cube, so
the L2 error is exact (mass-matrix quadratic form), not a nodal average.

Blob layout (all little-endian)::

    b"PWAV0001"
    u32 version, u32 d, u32 size[d], u32 q, u32 kind, u32 levels[d],
    u32 ordering, u32 weighting, f64 threshold, f64 s
    bitmap: ceil(N / 8) bytes, pyramid order, LSB first, bit set = kept
    f64 kept coefficients in pyramid order
"""

from __future__ import annotations

import enum
import io
import json
import math
import struct
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .gram import level_mass_matrix
from .tensor import Ordering, TensorTransform
from .update import ProjectorKind

__all__ = [
    "Weighting",
    "CodecConfig",
    "RateDistortionReport",
    "CompressedBlob",
    "BlobFormatError",
    "Encoder",
    "compress",
    "decompress",
    "coefficient_decay",
    "rd_sweep",
    "threshold_for_error",
    "l2_error",
    "MAGIC",
    "VERSION",
]

MAGIC = b"PWAV0001"
VERSION = 1


class BlobFormatError(ValueError):
    pass


class Weighting(enum.IntEnum):
    RAW = 0
    L2 = 1
    SOBOLEV = 2

    @classmethod
    def parse(cls, value) -> "Weighting":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            key = value.strip().lower().replace("-", "_")
            aliases = {"raw": cls.RAW, "l2": cls.L2, "l2_normalized": cls.L2,
                       "s": cls.SOBOLEV, "sobolev": cls.SOBOLEV, "s_weighted": cls.SOBOLEV}
            if key not in aliases:
                raise ValueError(f"unknown weighting {value!r}")
            return aliases[key]
        return cls(int(value))


@dataclass(frozen=True)
class CodecConfig:
    q: int = 1
    kind: ProjectorKind = ProjectorKind.CG
    ordering: Ordering = Ordering.MALLAT
    weighting: Weighting = Weighting.L2
    threshold: float = 0.0
    s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProjectorKind.parse(self.kind))
        object.__setattr__(self, "ordering", Ordering.parse(self.ordering))
        object.__setattr__(self, "weighting", Weighting.parse(self.weighting))
        if not self.threshold >= 0:
            raise ValueError("threshold must be non-negative")
        if self.weighting is Weighting.SOBOLEV and self.s >= self.q + 0.5:
            warnings.warn(
                f"s = {self.s} lies outside the norm-equivalence range s < q + 1/2",
                stacklevel=3,
            )

    def with_threshold(self, threshold: float) -> "CodecConfig":
        return CodecConfig(self.q, self.kind, self.ordering, self.weighting, threshold, self.s)


@dataclass
class RateDistortionReport:
    threshold: float
    cr: float
    l2_error: float
    linf_error: float
    retained: int
    total: int
    per_level_retained: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        d["per_level_retained"] = {str(k): int(v) for k, v in self.per_level_retained.items()}
        if math.isinf(d["threshold"]):
            d["threshold"] = "inf"
        return json.dumps(d, indent=2, sort_keys=True)


@dataclass(frozen=True)
class CompressedBlob:
    shape: tuple
    levels: tuple
    config: CodecConfig
    bitmap: np.ndarray
    values: np.ndarray

    @property
    def total(self) -> int:
        return int(np.prod(self.shape))

    def to_bytes(self) -> bytes:
        cfg = self.config
        buf = io.BytesIO()
        buf.write(MAGIC)
        d = len(self.shape)
        buf.write(struct.pack(f"<II{d}III{d}III", VERSION, d, *self.shape, cfg.q, int(cfg.kind),
                              *self.levels, int(cfg.ordering), int(cfg.weighting)))
        buf.write(struct.pack("<dd", cfg.threshold, cfg.s))
        buf.write(np.packbits(self.bitmap, bitorder="little").tobytes())
        buf.write(np.ascontiguousarray(self.values, dtype="<f8").tobytes())
        return buf.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedBlob":
        if data[:8] != MAGIC:
            raise BlobFormatError("bad magic; not a PWAV blob")
        off = 8
        try:
            version, d = struct.unpack_from("<II", data, off)
            off += 8
            if version != VERSION:
                raise BlobFormatError(f"unsupported blob version {version}")
            if not 1 <= d <= 3:
                raise BlobFormatError(f"unsupported dimension count {d}")
            fields = struct.unpack_from(f"<{d}III{d}III", data, off)
            off += 4 * (2 * d + 4)
            shape = tuple(fields[:d])
            q, kind = fields[d], fields[d + 1]
            levels = tuple(fields[d + 2 : 2 * d + 2])
            ordering, weighting = fields[2 * d + 2 :]
            threshold, s = struct.unpack_from("<dd", data, off)
            off += 16
        except struct.error as exc:
            raise BlobFormatError(f"truncated header: {exc}") from None
        total = int(np.prod(shape))
        nbytes = (total + 7) // 8
        if len(data) < off + nbytes:
            raise BlobFormatError("truncated bitmap")
        bitmap = np.unpackbits(np.frombuffer(data, np.uint8, nbytes, off), count=total,
                               bitorder="little").astype(bool)
        off += nbytes
        kept = int(bitmap.sum())
        if len(data) != off + 8 * kept:
            raise BlobFormatError(f"payload holds {(len(data) - off) / 8} values, bitmap expects {kept}")
        values = np.frombuffer(data, "<f8", kept, off).astype(np.float64)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = CodecConfig(q, kind, ordering, weighting, threshold, s)
        return cls(shape, levels, cfg, bitmap, values)


def l2_error(diff: np.ndarray, q: int, levels) -> float:
    """Exact L2 norm over [0, 1]^d of the piecewise polynomial with nodal values ``diff``."""
    diff = np.asarray(diff, dtype=np.float64)
    md = diff
    for axis, J in enumerate(levels):
        mass = level_mass_matrix(q, J)
        md = np.moveaxis(mass.matvec(np.moveaxis(md, axis, 0)), 0, axis)
    return math.sqrt(max(float(np.sum(diff * md)), 0.0))


class Encoder:
    """Transform once, then threshold repeatedly (sweeps, rate control)."""

    def __init__(self, data, cfg: CodecConfig):
        data = np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(data)):
            raise ValueError("input contains non-finite values")
        self.data = data
        self.cfg = cfg
        self.tt = TensorTransform(data.shape, cfg.kind, cfg.q)
        self.coeffs = self.tt.forward(data, cfg.ordering)
        self.order = self.tt.pyramid_order(cfg.ordering)
        self.levels = self.tt.levels_of(cfg.ordering)
        self.weights = self._weights()
        self.magnitude = np.abs(self.coeffs) * self.weights
        self.coarse = self.tt.coarse_mask()

    def _weights(self) -> np.ndarray:
        cfg = self.cfg
        if cfg.weighting is Weighting.RAW:
            return np.ones(self.tt.shape)
        norms = self.tt.coefficient_norms(cfg.ordering)
        if cfg.weighting is Weighting.L2:
            return norms
        return norms * 2.0 ** (cfg.s * np.maximum(self.levels, 0))

    def keep_mask(self, threshold: float) -> np.ndarray:
        return (self.magnitude >= threshold) | self.coarse

    def reconstruct(self, keep: np.ndarray) -> np.ndarray:
        return self.tt.inverse(np.where(keep, self.coeffs, 0.0), self.cfg.ordering)

    def report(self, threshold: float, keep=None, recon=None) -> RateDistortionReport:
        keep = self.keep_mask(threshold) if keep is None else keep
        recon = self.reconstruct(keep) if recon is None else recon
        diff = recon - self.data
        levels, counts = np.unique(self.levels[keep], return_counts=True)
        return RateDistortionReport(
            threshold=float(threshold),
            cr=float(keep.sum()) / keep.size,
            l2_error=l2_error(diff, self.cfg.q, self.tt.levels),
            linf_error=float(np.abs(diff).max()),
            retained=int(keep.sum()),
            total=int(keep.size),
            per_level_retained={int(l): int(c) for l, c in zip(levels, counts)},
        )

    def blob(self, threshold: float, keep=None) -> CompressedBlob:
        keep = self.keep_mask(threshold) if keep is None else keep
        bitmap = keep.ravel()[self.order]
        values = self.coeffs.ravel()[self.order][bitmap]
        return CompressedBlob(self.tt.shape, self.tt.levels, self.cfg.with_threshold(threshold),
                              bitmap, values)

    def sorted_magnitudes(self):
        """Weighted magnitudes in descending order with pyramid index and level."""
        mag = self.magnitude.ravel()[self.order]
        lev = self.levels.ravel()[self.order]
        idx = np.argsort(-mag, kind="stable")
        return mag[idx], idx, lev[idx]


def compress(data, cfg: CodecConfig):
    """Threshold the transform of ``data``; returns ``(blob, report)``."""
    enc = Encoder(data, cfg)
    keep = enc.keep_mask(cfg.threshold)
    return enc.blob(cfg.threshold, keep), enc.report(cfg.threshold, keep)


def decompress(blob) -> np.ndarray:
    if isinstance(blob, (bytes, bytearray, memoryview)):
        blob = CompressedBlob.from_bytes(bytes(blob))
    cfg = blob.config
    tt = TensorTransform(blob.shape, cfg.kind, cfg.q)
    if tt.levels != tuple(blob.levels):
        raise BlobFormatError(f"header levels {blob.levels} inconsistent with sizes {blob.shape}")
    flat = np.zeros(tt.size)
    flat[tt.pyramid_order(cfg.ordering)[blob.bitmap]] = blob.values
    return tt.inverse(flat.reshape(tt.shape), cfg.ordering)


def coefficient_decay(data, cfg: CodecConfig):
    """Sorted weighted coefficient magnitudes as ``(magnitude, index, level)``."""
    return Encoder(data, cfg).sorted_magnitudes()


def rd_sweep(data, cfg: CodecConfig, thresholds) -> list:
    enc = Encoder(data, cfg)
    return [enc.report(float(t)) for t in thresholds]


def threshold_for_error(enc: Encoder, target: float, max_iter: int = 40):
    """Largest threshold whose reconstruction error stays within ``target``.

    Bisects over the sorted weighted magnitudes, so each probe is a distinct
    retention set.  Returns ``(report_within, report_above)``; the second is
    the nearest probed threshold whose error exceeds the target (``None`` if
    even dropping every detail meets it).
    """
    mags = np.unique(enc.magnitude[~enc.coarse])
    candidates = np.concatenate([[0.0], mags, [np.inf]])
    lo, hi = 0, len(candidates) - 1
    best = enc.report(0.0)
    if best.l2_error > target:
        return best, None
    top = enc.report(np.inf)
    if top.l2_error <= target:
        return top, None
    above = top
    for _ in range(max_iter):
        if hi - lo <= 1:
            break
        mid = (lo + hi) // 2
        rep = enc.report(float(candidates[mid]))
        if rep.l2_error <= target:
            lo, best = mid, rep
        else:
            hi, above = mid, rep
    return best, above
