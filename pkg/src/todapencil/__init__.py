"""Subtraction-free isospectral transformations of bidiagonal-type matrix pencils.

A generalized eigenvalue problem ``A v = x B v`` whose pencil is assembled
from bidiagonal factors is turned into a standard eigenvalue problem for a
tridiagonal (``M == 1``) or banded upper Hessenberg (``M > 1``) matrix by
running a discrete Toda-type evolution that only adds, multiplies and divides.
"""
from todapencil.pencil import (
    EpsilonVector,
    PencilSpec,
    TransformResult,
    assemble_pencil,
    assemble_result,
)
from todapencil.scalar import ScalarMode, format_scalar, parse_rational
from todapencil.transform import (
    Breakdown,
    Trajectory,
    elementary_toda,
    hungry_toda,
    relativistic_toda,
    transform,
)

__all__ = [
    "Breakdown",
    "EpsilonVector",
    "PencilSpec",
    "ScalarMode",
    "Trajectory",
    "TransformResult",
    "assemble_pencil",
    "assemble_result",
    "elementary_toda",
    "format_scalar",
    "hungry_toda",
    "parse_rational",
    "relativistic_toda",
    "transform",
]
