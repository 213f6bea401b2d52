"""Eigenvalue inclusion sets with exclusion regions for complex tensors."""

__version__ = "0.1.0"

from .certificates import Certificate, Verdict, certify_brauer, certify_gersgorin
from .estimators import EigenOracle, InclusionRegion, NonsingularityCertifier
from .oracle import EigenPair, OracleConfig, eigen_solve, residual
from .raster import RasterGrid, emit, rasterize
from .regions import Family, RegionQuery, bounding_window, region_contains
from .tensor import (
    RowSums,
    Tensor,
    TensorFormatError,
    UsageError,
    apply,
    format_tensor,
    is_diagonal_index,
    is_symmetric,
    load_tensor,
    parse_tensor,
    row_sums,
)
