"""High-precision kernels and identity checks for Paley-Wiener spaces with
prescribed imaginary zeros, their Krein-system mu-functions, and the
Painleve VI equation satisfied by mu-function quotients."""

from .numerics import (ConditioningError, ConsistencyError, DimensionError,
                       Matrix, PrecisionCtx, QuadratureToleranceError,
                       Rational, det, fd_derivative, quad_nd, solve)
from .pwspace import CoeffVector, KernelValue, ZeroConfig
from .krein import DarbouxChain, MuRepresentation
from .painleve import CornerValues, PVIParams, XYState
from .report import ResidualReport, VerifyReport

__version__ = "0.1.0"

__all__ = [
    "ConditioningError", "ConsistencyError", "DimensionError", "Matrix",
    "PrecisionCtx", "QuadratureToleranceError", "Rational", "det",
    "fd_derivative", "quad_nd", "solve", "CoeffVector", "KernelValue",
    "ZeroConfig", "DarbouxChain", "MuRepresentation", "CornerValues",
    "PVIParams", "XYState", "ResidualReport", "VerifyReport", "__version__",
]
