"""Polynomial families ``p_n^(k)(x)`` rebuilt from a trajectory, and the
exact coefficientwise identities linking them to the evolution variables.

This module is verification code and may subtract freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from todapencil.pencil import PencilSpec, TransformResult, assemble_result
from todapencil.transform import Trajectory


class Polynomial:
    """Dense polynomial, ascending coefficients, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([Fraction(0), Fraction(1)])

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        p = cls([Fraction(1)])
        for r in roots:
            p = p * cls([-r, Fraction(1)])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Polynomial":
        lead = self.leading
        if lead == 0:
            raise ZeroDivisionError("zero polynomial has no monic normalization")
        return Polynomial(c / lead for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other):
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def shift(self, m: int = 1) -> "Polynomial":
        """Multiply by ``x**m``."""
        if self.is_zero():
            return self
        return Polynomial([0] * m + list(self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        lead = other.leading
        while len(rem) > dq and rem:
            shift = len(rem) - 1 - dq
            c = Fraction(rem[-1]) / lead
            quo[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(quo), Polynomial(rem)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c)
            if mono and c == 1:
                coef = ""
            elif mono:
                coef = f"({coef})*" if "/" in coef or coef.startswith("-") else coef + "*"
            terms.append(coef + mono)
        return " + ".join(terms)


class InsufficientTrajectory(LookupError):
    """The trajectory does not reach the requested ``(k, n)``."""


@dataclass
class PolyFamily:
    """Table of polynomials ``p_n^(k)`` keyed by ``(k, n)``."""

    N: int
    table: dict = field(default_factory=dict)

    def __contains__(self, key) -> bool:
        return key in self.table

    def __getitem__(self, key) -> Polynomial:
        try:
            return self.table[key]
        except KeyError:
            k, n = key
            raise InsufficientTrajectory(f"p_{n}^({k}) is not covered by the trajectory") from None

    def get(self, k: int, n: int) -> Polynomial:
        return self[(k, n)]

    def levels(self, n: int) -> list[int]:
        return sorted(k for (k, m) in self.table if m == n)

    def has(self, *keys) -> bool:
        return all(key in self.table for key in keys)


def _one_of(traj: Trajectory):
    return traj.q[0][0] * 0 + 1


def build_family_m1(trajectory: Trajectory, eps=None) -> PolyFamily:
    """Three-term recurrence at every level ``k`` where ``q^(k)`` and ``e^(k)`` exist::

        p_{n+1} = (x - q_n - (1-eps_{n-1}) e_{n-1}) p_n
                  - (eps_{n-1} x + (1-eps_{n-1}) q_{n-1}) e_{n-1} p_{n-1}
    """
    if trajectory.M != 1:
        raise ValueError("the three-term recurrence applies to M = 1 only")
    bits = (eps if eps is not None else trajectory.epsilon).bits
    N = trajectory.N
    one = _one_of(trajectory)
    fam = PolyFamily(N)
    X = Polynomial([one * 0, one])
    for k in range(min(len(trajectory.q), len(trajectory.e))):
        q, e = trajectory.q[k], trajectory.e[k]
        prev2, prev = Polynomial(), Polynomial([one])
        fam.table[(k, 0)] = prev
        for n in range(N):
            if n == 0:
                nxt = (X - q[0]) * prev
            else:
                b, em = bits[n - 1], e[n - 1]
                nxt = (X - q[n] - (1 - b) * em) * prev - (X * b + (1 - b) * q[n - 1]) * em * prev2
            prev2, prev = prev, nxt
            fam.table[(k, n + 1)] = nxt
    return fam


def build_family_general(trajectory: Trajectory, spec: PencilSpec | None = None) -> PolyFamily:
    """Induction on ``n`` from ``p_0^(k) = 1`` with ``p_{n+1}^(k) = x p_n^(k+1) - q_n^(k) p_n^(k)``.

    With ``q`` known on levels ``0..K``, ``p_n^(k)`` is available for
    ``k <= K + 1 - n``.
    """
    N = trajectory.N
    K = len(trajectory.q) - 1
    one = _one_of(trajectory)
    fam = PolyFamily(N)
    for k in range(K + 2):
        fam.table[(k, 0)] = Polynomial([one])
    for n in range(N):
        for k in range(K + 1 - n):
            fam.table[(k, n + 1)] = fam.table[(k + 1, n)].shift() - fam.table[(k, n)] * trajectory.q[k][n]
    return fam


@dataclass
class IdentityCheck:
    name: str
    checked: int = 0
    failure: tuple | None = None  # first failing (k, n)

    @property
    def passed(self) -> bool:
        return self.failure is None

    def record(self, ok: bool, k: int, n: int):
        self.checked += 1
        if not ok and self.failure is None:
            self.failure = (k, n)

    def __str__(self):
        status = "pass" if self.passed else f"FAIL at (k, n) = {self.failure}"
        return f"{self.name}: {status} ({self.checked} checked)"


@dataclass
class IdentityReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


def _extract_result(traj: Trajectory) -> TransformResult:
    M, N = traj.M, traj.N
    eta = traj.epsilon.eta
    q_hat = [[traj.f[j + eta[n] * M][n] for n in range(N)] for j in range(M)]
    e_hat = [traj.e[eta[n + 1] * M][n] for n in range(N - 1)]
    return TransformResult(q_hat, e_hat, traj.epsilon)


def check_identities(
    family: PolyFamily,
    trajectory: Trajectory,
    spec: PencilSpec | None = None,
    result: TransformResult | None = None,
) -> IdentityReport:
    """Check every identity at every ``(k, n)`` where all its terms are available.

    * ``geronimus``: ``p_n^(k) = p_n^(k+M) + e_{n-1}^(k) p_{n-1}^(k+(1-eps_{n-1})M)``
    * ``christoffel_f``: ``x p_n^(k+1) = p_{n+1}^(k+eps_n M) + f_n^(k) p_n^(k)``
    * ``christoffel_d``: ``x p_n^(k+1) = p_{n+1}^(k+(eps_n-1)M) + d_n^(k) p_n^(k)``
    * ``periodicity``: ``p_N^(k+M) = p_N^(k)``
    * M=1 only: ``three_term`` (the merged relation) and ``tridiagonal``
      (``T_hat p_hat + p_N e_{N-1} = x p_hat``)
    * any M: ``hat_christoffel`` (``x p_hat^(j+1) = R_hat^(j) p_hat^(j) + p_N^(j) e_{N-1}``
      for ``j < M``) and ``hat_geronimus`` (``p_hat^(0) = L_hat p_hat^(M)``)

    The mask is extended with ``eps_{N-1} = 0`` (with ``e_{N-1} = 0``) so the
    last row of each relation falls back to the plain Christoffel step.
    """
    traj = trajectory
    M, N = traj.M, traj.N
    eps = (spec.epsilon if spec is not None else traj.epsilon).bits + (0,)
    eta = traj.epsilon.eta
    if result is None:
        result = _extract_result(traj)
    fam = family
    K = len(traj.q)
    X = Polynomial.x()

    def e_at(k, n):
        return traj.e[k][n] if n < N - 1 else 0

    gt = IdentityCheck("geronimus")
    for k in range(len(traj.e)):
        for n in range(1, N):
            keys = ((k, n), (k + M, n), (k + (1 - eps[n - 1]) * M, n - 1))
            if fam.has(*keys):
                lhs = fam[keys[0]]
                rhs = fam[keys[1]] + fam[keys[2]] * traj.e[k][n - 1]
                gt.record(lhs == rhs, k, n)

    ctf = IdentityCheck("christoffel_f")
    for k in range(len(traj.f)):
        for n in range(N):
            keys = ((k + 1, n), (k + eps[n] * M, n + 1), (k, n))
            if fam.has(*keys):
                ctf.record(fam[keys[0]].shift() == fam[keys[1]] + fam[keys[2]] * traj.f[k][n], k, n)

    ctd = IdentityCheck("christoffel_d")
    for k in range(len(traj.d)):
        if traj.d[k] is None:
            continue
        for n in range(N):
            j = k + (eps[n] - 1) * M
            keys = ((k + 1, n), (j, n + 1), (k, n))
            if j >= 0 and fam.has(*keys):
                ctd.record(fam[keys[0]].shift() == fam[keys[1]] + fam[keys[2]] * traj.d[k][n], k, n)

    per = IdentityCheck("periodicity")
    for k in range(K + 1):
        if fam.has((k, N), (k + M, N)):
            per.record(fam[(k, N)] == fam[(k + M, N)], k, N)

    checks = [gt, ctf, ctd, per]

    if M == 1:
        ttr = IdentityCheck("three_term")
        for k in range(len(traj.f)):
            for n in range(N):
                if n == 0:
                    keys = ((k, 0), (k + eps[0], 1))
                    if fam.has(*keys):
                        rhs = fam[keys[1]] + fam[keys[0]] * traj.f[k][0]
                        ttr.record(fam[keys[0]].shift() == rhs, k, n)
                    continue
                back = k - eps[n - 1]
                if back < 0 or back >= len(traj.f):
                    continue
                keys = ((k, n), (k + eps[n], n + 1), (back, n - 1))
                if fam.has(*keys):
                    em = traj.e[k][n - 1]
                    rhs = (
                        fam[keys[1]]
                        + fam[keys[0]] * (traj.f[k][n] + em)
                        + fam[keys[2]] * (traj.f[back][n - 1] * em)
                    )
                    ttr.record(fam[keys[0]].shift() == rhs, k, n)
        checks.append(ttr)

        tri = IdentityCheck("tridiagonal")
        keys = [(eta[n], n) for n in range(N)] + [(0, N)]
        if fam.has(*keys):
            T = assemble_result(result)
            p_hat = [fam[key] for key in keys[:N]]
            p_N = fam[(0, N)]
            for n in range(N):
                lhs = Polynomial()
                for m in range(max(n - 1, 0), min(n + 2, N)):
                    lhs = lhs + p_hat[m] * T[n][m]
                if n == N - 1:
                    lhs = lhs + p_N
                tri.record(lhs == p_hat[n].shift(), 0, n)
        checks.append(tri)

    hct = IdentityCheck("hat_christoffel")
    for j in range(M):
        keys_j = [(j + eta[n] * M, n) for n in range(N)]
        keys_next = [(j + 1 + eta[n] * M, n) for n in range(N)]
        if not fam.has(*keys_j, *keys_next, (j, N)):
            continue
        for n in range(N):
            rhs = fam[keys_j[n]] * result.q_hat[j][n]
            rhs = rhs + (fam[keys_j[n + 1]] if n + 1 < N else fam[(j, N)])
            hct.record(fam[keys_next[n]].shift() == rhs, j, n)
    checks.append(hct)

    hgt = IdentityCheck("hat_geronimus")
    keys_0 = [(eta[n] * M, n) for n in range(N)]
    keys_M = [(M + eta[n] * M, n) for n in range(N)]
    if fam.has(*keys_0, *keys_M):
        for n in range(N):
            rhs = fam[keys_M[n]]
            if n:
                rhs = rhs + fam[keys_M[n - 1]] * result.e_hat[n - 1]
            hgt.record(fam[keys_0[n]] == rhs, 0, n)
    checks.append(hgt)

    return IdentityReport(checks)


def p_hat(family: PolyFamily, eps, M: int, k: int = 0) -> list[Polynomial]:
    """``p_hat_n^(k) = p_n^(k + eta_n M)`` for ``n = 0..N-1``."""
    eta = eps.eta
    return [family[(k + eta[n] * M, n)] for n in range(len(eta))]


def _permutation_sign(perm) -> int:
    perm, sign = list(perm), 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def spectral_polynomial(family: PolyFamily, M: int, k: int = 0) -> Polynomial:
    """Polynomial in ``y = x**M`` whose zeros are the pencil eigenvalues.

    An eigenvalue ``y = x**M`` needs weights ``w_nu`` with
    ``sum_nu w_nu w**(-nu j) p_N^(k+j)(x w**(-nu)) = 0`` for ``j < M``
    (``w`` a primitive M-th root of unity). Writing
    ``p_N^(k+j)(x) = sum_s x**s P_s^(k+j)(x**M)`` splits that matrix into a
    DFT factor times ``[y**[t<j] P_{(t-j) mod M}^(k+j)(y)]_{j,t}``, up to
    diagonal powers of ``x``. The determinant of the latter is returned;
    for ``M = 1`` it is ``p_N^(k)`` itself.
    """
    N = family.N

    def part(level, s):
        return Polynomial(family[(level, N)].coeffs[s::M])

    C = [
        [part(k + j, (t - j) % M).shift() if t < j else part(k + j, (t - j) % M) for t in range(M)]
        for j in range(M)
    ]
    total = Polynomial()
    for perm in permutations(range(M)):
        term = Polynomial([Fraction(1)])
        for j in range(M):
            term = term * C[j][perm[j]]
        total = total + term * _permutation_sign(perm)
    return total
