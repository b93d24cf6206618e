"""Convolution-quadrature time stepping for the 1-D subdiffusion equation."""

from ._core import (
    averaged_weights,
    base_weights,
    consistency_residual,
    measure,
    mittag_leffler,
    residue_term,
    solve,
    symbol,
    verify,
)

__all__ = [
    "averaged_weights",
    "base_weights",
    "consistency_residual",
    "measure",
    "mittag_leffler",
    "residue_term",
    "solve",
    "symbol",
    "verify",
]
