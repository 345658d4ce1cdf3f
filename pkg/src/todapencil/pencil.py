"""Pencil and result types, plus dense assembly for verification and display.

Sign conventions (the usual source of bugs):

* ``L_eps``      carries ``-eps[n] * e[n]`` on the subdiagonal,
* ``L_eps_star`` carries ``+(1 - eps[n]) * e[n]``,
* ``L_hat``      carries ``+e_hat[n]``.

All upper bidiagonal factors have a unit superdiagonal. The transforms never
build these dense matrices; only verification and I/O do.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

Matrix = list  # list[list[scalar]], square


@dataclass(frozen=True)
class EpsilonVector:
    """0/1 mask of length N-1 with its prefix sums ``eta`` (length N)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"epsilon entries must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def ones(cls, N: int) -> "EpsilonVector":
        return cls((1,) * max(N - 1, 0))

    @classmethod
    def zeros(cls, N: int) -> "EpsilonVector":
        return cls((0,) * max(N - 1, 0))

    @property
    def N(self) -> int:
        return len(self.bits) + 1

    @property
    def eta(self) -> tuple[int, ...]:
        return tuple(accumulate(self.bits, initial=0))

    def all_ones(self) -> bool:
        return all(self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, n):
        return self.bits[n]

    def __iter__(self):
        return iter(self.bits)


@dataclass(frozen=True)
class PencilSpec:
    """Pencil ``(L_eps_star R^(M-1) ... R^(0), L_eps)``.

    ``q[k][n]`` is the diagonal of ``R^(k)``; ``e[n]`` feeds both lower factors.
    """

    q: tuple[tuple, ...]
    e: tuple
    epsilon: EpsilonVector

    def __post_init__(self):
        q = tuple(tuple(row) for row in self.q)
        e = tuple(self.e)
        eps = self.epsilon
        if not isinstance(eps, EpsilonVector):
            eps = EpsilonVector(tuple(eps))
        if not q:
            raise ValueError("at least one upper bidiagonal factor is required (M >= 1)")
        N = len(q[0])
        if N < 1:
            raise ValueError("matrix order N must be positive")
        for k, row in enumerate(q):
            if len(row) != N:
                raise ValueError(f"q[{k}] has length {len(row)}, expected N={N}")
        if len(e) != N - 1:
            raise ValueError(f"e has length {len(e)}, expected N-1={N - 1}")
        if len(eps) != N - 1:
            raise ValueError(f"epsilon has length {len(eps)}, expected N-1={N - 1}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "epsilon", eps)

    @classmethod
    def create(cls, q, e, epsilon=None) -> "PencilSpec":
        """Convenience constructor: a flat ``q`` means M=1, missing epsilon means all ones.

        ints and strings become Fractions (plain int division would leave the
        rationals); floats are kept as floats.
        """

        def lift(x):
            return x if isinstance(x, (float, Fraction)) else Fraction(x)

        q = list(q)
        if q and not isinstance(q[0], (list, tuple)):
            q = [q]
        N = len(q[0]) if q else 0
        if epsilon is None:
            epsilon = EpsilonVector.ones(N)
        elif not isinstance(epsilon, EpsilonVector):
            epsilon = EpsilonVector(tuple(epsilon))
        return cls(tuple(tuple(lift(x) for x in r) for r in q), tuple(lift(x) for x in e), epsilon)

    @property
    def N(self) -> int:
        return len(self.q[0])

    @property
    def M(self) -> int:
        return len(self.q)

    def is_positive(self) -> bool:
        return all(x > 0 for row in self.q for x in row) and all(x > 0 for x in self.e)


@dataclass(frozen=True)
class TransformResult:
    """Factors of the isospectral matrix ``L_hat R_hat^(M-1) ... R_hat^(0)``."""

    q_hat: tuple[tuple, ...]
    e_hat: tuple
    epsilon: EpsilonVector

    def __post_init__(self):
        object.__setattr__(self, "q_hat", tuple(tuple(r) for r in self.q_hat))
        object.__setattr__(self, "e_hat", tuple(self.e_hat))

    @property
    def N(self) -> int:
        return len(self.q_hat[0])

    @property
    def M(self) -> int:
        return len(self.q_hat)

    @property
    def kind(self) -> str:
        return "tridiagonal" if self.M == 1 else "hessenberg"

    def is_positive(self) -> bool:
        return all(x > 0 for row in self.q_hat for x in row) and all(x > 0 for x in self.e_hat)


def _zero_like(x):
    return x * 0


def identity(N: int, one=Fraction(1)) -> Matrix:
    zero = _zero_like(one)
    return [[one if i == j else zero for j in range(N)] for i in range(N)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = A[i][0] * B[0][j]
            for t in range(1, m):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def build_upper_bidiagonal(q: Sequence) -> Matrix:
    """Diagonal ``q``, unit superdiagonal."""
    N = len(q)
    if N < 1:
        raise ValueError("need at least one diagonal entry")
    one = _zero_like(q[0]) + 1
    M = identity(N, one)
    for n in range(N):
        M[n][n] = q[n]
        if n + 1 < N:
            M[n][n + 1] = one
    return M


def _unit_lower(sub: Sequence, N: int, one) -> Matrix:
    M = identity(N, one)
    for n, value in enumerate(sub):
        M[n + 1][n] = value
    return M


def _one_for(e: Sequence, N: int):
    return _zero_like(e[0]) + 1 if e else Fraction(1)


def build_L_epsilon(e: Sequence, eps: EpsilonVector | Sequence[int]) -> Matrix:
    """Unit lower bidiagonal with subdiagonal ``-eps[n] * e[n]``."""
    if len(e) != len(eps):
        raise ValueError("e and epsilon lengths differ")
    N = len(e) + 1
    return _unit_lower([-(b * x) for b, x in zip(eps, e)], N, _one_for(e, N))


def build_L_epsilon_star(e: Sequence, eps: EpsilonVector | Sequence[int]) -> Matrix:
    """Unit lower bidiagonal with subdiagonal ``(1 - eps[n]) * e[n]``."""
    if len(e) != len(eps):
        raise ValueError("e and epsilon lengths differ")
    N = len(e) + 1
    return _unit_lower([(1 - b) * x for b, x in zip(eps, e)], N, _one_for(e, N))


def build_L_hat(e_hat: Sequence) -> Matrix:
    """Unit lower bidiagonal with subdiagonal ``+e_hat[n]``."""
    N = len(e_hat) + 1
    return _unit_lower(list(e_hat), N, _one_for(e_hat, N))


def assemble_pencil(spec: PencilSpec) -> tuple[Matrix, Matrix]:
    """``A = L_eps_star R^(M-1) ... R^(0)`` and ``B = L_eps``."""
    A = build_L_epsilon_star(spec.e, spec.epsilon) if spec.N > 1 else identity(1, spec.q[0][0] * 0 + 1)
    for row in reversed(spec.q):
        A = matmul(A, build_upper_bidiagonal(row))
    B = build_L_epsilon(spec.e, spec.epsilon) if spec.N > 1 else identity(1, spec.q[0][0] * 0 + 1)
    return A, B


def assemble_result(result: TransformResult) -> Matrix:
    """``T_hat = L_hat R_hat^(0)`` for M=1, ``H_hat = L_hat R_hat^(M-1) ... R_hat^(0)`` otherwise."""
    H = build_L_hat(result.e_hat) if result.N > 1 else identity(1, result.q_hat[0][0] * 0 + 1)
    for row in reversed(result.q_hat):
        H = matmul(H, build_upper_bidiagonal(row))
    return H


def format_matrix(A: Matrix, fmt=str) -> str:
    cells = [[fmt(x) for x in row] for row in A]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)
