"""Numerical q-series, trace functions and Macdonald polynomials for U_q(affine sl2)."""

__version__ = "0.1.0"

from .qcore import PrecisionCfg, QBase, qpow  # noqa: F401
from .fv import ParamPoint  # noqa: F401
