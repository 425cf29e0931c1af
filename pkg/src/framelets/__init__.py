"""Compactly supported directional Parseval framelets from B-spline low-pass masks.

The unitary extension principle is reduced to a finite problem: find rows
``D`` such that ``(c; D)`` is a Parseval frame of R^N, where ``c`` holds the
square roots of the low-pass coefficients.  Designed high-pass filters are
weighted by a trace maximization, the frame is completed by SVD, and every
property is checked exactly in coefficient space.
"""

from .completion import FrameDesign, complete, projection_bank
from .dvm import Direction, admissible_direction, dvm_order, max_dvm_filter, moments
from .errors import (
    DesignError,
    DirectionError,
    FrameletError,
    InadmissibleLowpassError,
    InfeasibleDesignError,
    NotParsevalError,
    RankDeficientError,
)
from .mask import FilterMask, OffsetGrid, devectorize, evaluate, tensor_product, vectorize
from .optimize import OptimizationResult, error_constant, optimize_lambda
from .pipeline import DesignRequest, demo, run_pipeline
from .spline import SplineSpec, bspline_lowpass, sqrt_vector
from .transform import Decomposition, analyze, convolve_demo, synthesize, truncation_error
from .uep import FilterBank, assemble_bank, check_diagonal_uep, check_general_uep, gram

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "DesignError",
    "DesignRequest",
    "Direction",
    "DirectionError",
    "FilterBank",
    "FilterMask",
    "FrameDesign",
    "FrameletError",
    "InadmissibleLowpassError",
    "InfeasibleDesignError",
    "NotParsevalError",
    "OffsetGrid",
    "OptimizationResult",
    "RankDeficientError",
    "SplineSpec",
    "admissible_direction",
    "analyze",
    "assemble_bank",
    "bspline_lowpass",
    "check_diagonal_uep",
    "check_general_uep",
    "complete",
    "convolve_demo",
    "demo",
    "devectorize",
    "dvm_order",
    "error_constant",
    "evaluate",
    "gram",
    "max_dvm_filter",
    "moments",
    "optimize_lambda",
    "projection_bank",
    "run_pipeline",
    "sqrt_vector",
    "synthesize",
    "tensor_product",
    "truncation_error",
    "vectorize",
]
