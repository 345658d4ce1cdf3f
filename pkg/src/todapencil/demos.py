"""The three worked pencils used as demos and golden tests."""
from __future__ import annotations

from fractions import Fraction

from todapencil.pencil import EpsilonVector, PencilSpec


def _ints(lo, hi):
    return tuple(Fraction(i) for i in range(lo, hi + 1))


def bidiagonal_demo() -> PencilSpec:
    """``R = bidiag(1..5)``, ``L`` with subdiagonal ``-(6..9)``."""
    return PencilSpec((_ints(1, 5),), _ints(6, 9), EpsilonVector.ones(5))


def tridiagonal_demo() -> PencilSpec:
    """N = 6, eps = (1,1,1,0,0), ``q = 1..6``, ``e = 7..11``."""
    return PencilSpec((_ints(1, 6),), _ints(7, 11), EpsilonVector((1, 1, 1, 0, 0)))


def hessenberg_demo() -> PencilSpec:
    """N = 6, M = 3, eps = (1,1,1,0,0), ``q^(k) = (k+1)..(k+6)``, ``e = 7..11``."""
    return PencilSpec(tuple(_ints(k + 1, k + 6) for k in range(3)), _ints(7, 11), EpsilonVector((1, 1, 1, 0, 0)))


DEMOS = {2: bidiagonal_demo, 3: tridiagonal_demo, 4: hessenberg_demo}
