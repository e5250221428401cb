"""Exact arithmetic in divided powers and the stabilizer computations built on it."""

from .scalars import GF, QQ, FieldSpec, Scalar, make_dual_numbers, truncated_poly_algebra
from .linalg import FieldMatrix
from .gamma import GammaElement, SymElement, pure_symbol, gamma_mul, pairing

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "FieldSpec",
    "Scalar",
    "FieldMatrix",
    "GammaElement",
    "SymElement",
    "make_dual_numbers",
    "truncated_poly_algebra",
    "pure_symbol",
    "gamma_mul",
    "pairing",
]
