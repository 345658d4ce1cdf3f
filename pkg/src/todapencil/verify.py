"""Independent exact oracles for the transforms.

* ``charpoly``: ``det(A - x B)`` by exact determinants at the nodes
  ``0, 1, ..., N`` followed by exact interpolation.
* ``moments_from_tridiagonal`` / ``tau`` / ``check_tau_formulas``: Hankel
  determinants of ``mu_m = e_0^T T^m e_0`` and the closed forms they give for
  the factors of a tridiagonal ``T = L_hat R_hat``. The moments can also be
  taken from the input pencil, which makes the check independent of the
  transform.
* ``real_roots``: Sturm sequences plus bisection on exact coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from todapencil.pencil import Matrix, PencilSpec, TransformResult, assemble_pencil, assemble_result, identity
from todapencil.polyseq import Polynomial


def _require_exact(*matrices):
    for A in matrices:
        for row in A:
            for x in row:
                if isinstance(x, float):
                    raise TypeError("exact verification needs rational entries, got a float")


def determinant(A: Matrix) -> Fraction:
    """Rational Gaussian elimination with row pivoting on the first nonzero entry."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        p = M[col][col]
        det *= p
        for r in range(col + 1, n):
            if M[r][col] != 0:
                factor = M[r][col] / p
                row_r, row_c = M[r], M[col]
                for j in range(col, n):
                    row_r[j] -= factor * row_c[j]
    return det


def interpolate(nodes: Sequence, values: Sequence) -> Polynomial:
    """Exact polynomial through ``(nodes[i], values[i])`` via Newton divided differences."""
    xs = [Fraction(x) for x in nodes]
    coef = [Fraction(v) for v in values]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Polynomial([coef[n - 1]])
    for i in range(n - 2, -1, -1):
        p = p.shift() - p * xs[i] + coef[i]
    return p


def charpoly(A: Matrix, B: Matrix | None = None) -> Polynomial:
    """Monic ``det(A - x B)``; ``B = None`` means the identity."""
    N = len(A)
    if B is None:
        B = identity(N)
    if len(B) != N or any(len(row) != N for row in A) or any(len(row) != N for row in B):
        raise ValueError("A and B must be square of the same order")
    _require_exact(A, B)
    nodes = list(range(N + 1))
    values = [determinant([[a - lam * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]) for lam in nodes]
    p = interpolate(nodes, values)
    if p.degree != N:
        raise ValueError(f"det(A - xB) has degree {p.degree} < {N}; B is singular")
    return p.monic()


@dataclass
class IsospectralReport:
    pencil_charpoly: Polynomial
    result_charpoly: Polynomial
    roots: "RootReport | None" = None

    @property
    def equal(self) -> bool:
        return self.pencil_charpoly == self.result_charpoly


def isospectral_report(spec: PencilSpec, result: TransformResult, tol: float | None = None) -> IsospectralReport:
    A, B = assemble_pencil(spec)
    report = IsospectralReport(charpoly(A, B), charpoly(assemble_result(result)))
    if tol is not None:
        report.roots = real_roots(report.pencil_charpoly, tol)
    return report


# -- moments and tau functions ------------------------------------------------


class MissingMoments(LookupError):
    pass


class TauBreakdown(ZeroDivisionError):
    pass


@dataclass
class MomentSequence:
    """``mu[i]`` holds the moment with index ``start + i``."""

    mu: list
    start: int = 0

    def __getitem__(self, m: int):
        i = m - self.start
        if i < 0 or i >= len(self.mu):
            raise MissingMoments(f"moment mu_{m} not available (have {self.start}..{self.start + len(self.mu) - 1})")
        return self.mu[i]

    def __len__(self):
        return len(self.mu)


def moments_from_tridiagonal(T: Matrix, count: int, start: int = 0) -> MomentSequence:
    """``mu_{start+m} = e_0^T T^m e_0`` for ``m = 0..count-1`` by repeated matrix-vector products."""
    N = len(T)
    one = T[0][0] * 0 + 1
    v = [one] + [one * 0] * (N - 1)
    mu = []
    for _ in range(count):
        mu.append(v[0])
        v = [sum((T[i][j] * v[j] for j in range(N)), one * 0) for i in range(N)]
    return MomentSequence(mu, start)


def moments_from_pencil(spec: PencilSpec, count: int, start: int = 0) -> MomentSequence:
    """Moments of the output functional computed from the input pencil alone.

    ``mu_{start+m} = e_0^T C^(m + eps_0) e_0`` with ``C = B^-1 A``. The extra
    power ``eps_0`` appears because a leading coupling on the B side moves
    the functional one step along the Laurent moments. The sequence is
    scaled so its first entry is 1; tau ratios do not see the scale.
    """
    if spec.M != 1:
        raise ValueError("pencil moments are defined here for M = 1 only")
    A, B = assemble_pencil(spec)
    _require_exact(A, B)
    N = spec.N
    offset = spec.epsilon[0] if N > 1 else 0
    v = [Fraction(1)] + [Fraction(0)] * (N - 1)
    mu = []
    for step in range(count + offset):
        if step >= offset:
            mu.append(v[0])
        w = [sum((A[i][j] * v[j] for j in range(N)), Fraction(0)) for i in range(N)]
        # B is unit lower bidiagonal: forward substitution
        for i in range(1, N):
            w[i] -= B[i][i - 1] * w[i - 1]
        v = w
    scale = mu[0] if mu else 1
    return MomentSequence([m / scale for m in mu], start)


def tau(mu: MomentSequence, n: int, k: int, M: int = 1):
    """(Block) Hankel determinant ``|mu_{k + i M + j}|_{i,j < n}``; ``tau_0 = 1``."""
    if n == 0:
        return Fraction(1)
    H = [[mu[k + i * M + j] for j in range(n)] for i in range(n)]
    return determinant(H)


@dataclass
class TauReport:
    q_hat: list = field(default_factory=list)  # per n: (expected, got, ok)
    e_hat: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.q_hat) and all(ok for *_, ok in self.e_hat)

    def failures(self) -> list[str]:
        out = [f"q_hat[{n}]" for n, (_, _, ok) in enumerate(self.q_hat) if not ok]
        out += [f"e_hat[{n}]" for n, (_, _, ok) in enumerate(self.e_hat) if not ok]
        return out


def check_tau_formulas(result: TransformResult, k: int = 0, spec: PencilSpec | None = None) -> TauReport:
    """Compare ``q_hat``, ``e_hat`` with the Hankel ratios of the output's own moments.

    With ``mu_{k+m} = e_0^T T_hat^m e_0``::

        q_hat_n = tau_n^(k) tau_{n+1}^(k+1) / (tau_n^(k+1) tau_{n+1}^(k))
        e_hat_n = tau_n^(k+1) tau_{n+2}^(k) / (tau_{n+1}^(k) tau_{n+1}^(k+1))

    ``k`` only labels the time level and does not change the outcome.

    Without ``spec`` the moments come from ``T_hat`` itself, so the check
    confirms the read-out of the factors but holds for any LR-factored
    tridiagonal. Passing the input ``spec`` takes the moments from the
    pencil instead, which ties ``q_hat``, ``e_hat`` to the input.
    """
    if result.M != 1:
        raise ValueError("the Hankel tau oracle is available for M = 1 only")
    T = assemble_result(result)
    _require_exact(T)
    N = result.N
    if spec is None:
        mu = moments_from_tridiagonal(T, 2 * N, start=k)
    else:
        mu = moments_from_pencil(spec, 2 * N, start=k)
    t0 = [tau(mu, n, k) for n in range(N + 1)]
    t1 = [tau(mu, n, k + 1) for n in range(N + 1)]

    def ratio(num, den, what):
        if den == 0:
            raise TauBreakdown(f"vanishing tau in the denominator of {what}")
        return num / den

    report = TauReport()
    for n in range(N):
        expected = ratio(t0[n] * t1[n + 1], t1[n] * t0[n + 1], f"q_hat[{n}]")
        got = result.q_hat[0][n]
        report.q_hat.append((expected, got, expected == got))
    for n in range(N - 1):
        expected = ratio(t1[n] * t0[n + 2], t0[n + 1] * t1[n + 1], f"e_hat[{n}]")
        got = result.e_hat[n]
        report.e_hat.append((expected, got, expected == got))
    return report


# -- real roots -----------------------------------------------------------------


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: ``p = lead * prod(a_i ** i)`` with each ``a_i`` squarefree."""
    p = p.monic()
    if p.degree < 1:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p.divmod(a0)[0]
    c = dp.divmod(a0)[0]
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.divmod(a)[0]
        c = d.divmod(a)[0]
        d = c - b.derivative()
        i += 1
    return out


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        rem = seq[-2].divmod(seq[-1])[1]
        if rem.is_zero():
            break
        seq.append(-rem)
    return [s for s in seq if not s.is_zero()]


def _sign_changes(seq: list[Polynomial], x: Fraction) -> int:
    changes, last = 0, 0
    for s in seq:
        v = s(x)
        if v == 0:
            continue
        sign = 1 if v > 0 else -1
        if last and sign != last:
            changes += 1
        last = sign
    return changes


def cauchy_bound(p: Polynomial) -> Fraction:
    lead = Fraction(p.leading)
    return 1 + max((abs(Fraction(c) / lead) for c in p.coeffs[:-1]), default=Fraction(0))


def _isolate(p: Polynomial, tol: Fraction) -> list[Fraction]:
    """Midpoints of width-``tol`` brackets around each real root of a squarefree ``p``."""
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)

    def count(a, b):  # roots in (a, b]
        return _sign_changes(seq, a) - _sign_changes(seq, b)

    roots = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        c = count(a, b)
        if c == 0:
            continue
        if c > 1:
            m = (a + b) / 2
            stack.extend([(m, b), (a, m)])
            continue
        while b - a > tol:
            m = (a + b) / 2
            if p(m) == 0:
                a = b = m
                break
            if count(a, m) == 1:
                b = m
            else:
                a = m
        roots.append((a + b) / 2)
    return sorted(roots)


@dataclass
class RootReport:
    roots: list  # ascending floats, one per distinct real root
    multiplicities: list
    nonreal: int  # number of roots (with multiplicity) not on the real line

    @property
    def all_real_simple(self) -> bool:
        return self.nonreal == 0 and all(m == 1 for m in self.multiplicities)

    @property
    def non_simple(self) -> int:
        return self.nonreal + sum(m for m in self.multiplicities if m > 1)


def real_roots(p: Polynomial, tol: float = 1e-10) -> RootReport:
    """Isolate and refine every real root of an exact polynomial.

    Roots are refined by bisection to brackets of width at most ``tol``.
    Multiple roots are reported once with their multiplicity; the count of
    non-real roots is returned separately.
    """
    if p.degree < 1:
        return RootReport([], [], 0)
    tolf = Fraction(tol)
    found = []
    for factor, mult in squarefree_decomposition(p):
        for r in _isolate(factor, tolf):
            found.append((r, mult))
    found.sort()
    real_count = sum(m for _, m in found)
    return RootReport([float(r) for r, _ in found], [m for _, m in found], p.degree - real_count)
