"""Multilevel piecewise-polynomial wavelet transforms and a threshold codec."""

from .basis import basis_norms, cascade_dual, cascade_primal, level_norms
from .codec import CodecConfig, CompressedBlob, Weighting, compress, decompress, rd_sweep
from .grid import CoefficientPyramid, GridHierarchy, InadmissibleSizeError
from .lifting import TransformPlan, forward, inverse, make_plan
from .tensor import Ordering, TensorTransform
from .update import ProjectorKind

__version__ = "0.1.0"

__all__ = [
    "ProjectorKind",
    "Ordering",
    "Weighting",
    "GridHierarchy",
    "CoefficientPyramid",
    "InadmissibleSizeError",
    "TransformPlan",
    "make_plan",
    "forward",
    "inverse",
    "TensorTransform",
    "cascade_primal",
    "cascade_dual",
    "basis_norms",
    "level_norms",
    "CodecConfig",
    "CompressedBlob",
    "compress",
    "decompress",
    "rd_sweep",
]
