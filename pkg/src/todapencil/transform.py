"""Subtraction-free isospectral transformations driven by discrete Toda flows.

Three engines:

* ``relativistic_toda`` -- discrete relativistic Toda lattice, pencil
  ``(R, L)`` with every ``eps[n] == 1``; output is tridiagonal.
* ``elementary_toda``   -- discrete elementary Toda orbits, arbitrary mask,
  one upper factor; output is tridiagonal.
* ``hungry_toda``       -- discrete hungry elementary Toda orbits, ``M``
  upper factors; output is upper Hessenberg with ``M`` superdiagonals.

Only ``+``, ``*`` and ``/`` are applied to scalars, and this file contains no
minus sign at all (index arithmetic included) so the property can be audited
statically. Every divisor is compared with zero before use.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from todapencil.pencil import EpsilonVector, PencilSpec, TransformResult


class Breakdown(ArithmeticError):
    """A zero divisor was met during the evolution at time level ``k``, index ``n``."""

    def __init__(self, k: int, n: int, divisor: str, trajectory: "Trajectory | None" = None):
        super().__init__(f"breakdown at k={k}, n={n}: divisor {divisor} is zero")
        self.k = k
        self.n = n
        self.divisor = divisor
        self.trajectory = trajectory


@dataclass
class Trajectory:
    """Every time level of the evolution.

    ``q[k]``, ``e[k]``, ``f[k]`` and ``d[k]`` are lists over ``n``; ``d[k]`` is
    ``None`` for the first ``M`` levels, where it is not produced. ``k_max``
    is the last time step whose ``f`` row was computed.
    """

    M: int
    epsilon: EpsilonVector
    q: list = field(default_factory=list)
    e: list = field(default_factory=list)
    f: list = field(default_factory=list)
    d: list = field(default_factory=list)
    k_max: int | None = None

    @property
    def N(self) -> int:
        return len(self.q[0])

    def values(self):
        """Iterate over every stored scalar."""
        for table in (self.q, self.e, self.f, self.d):
            for row in table:
                if row is not None:
                    yield from row


def _div(num, den, k, n, name, traj):
    if den == 0:
        raise Breakdown(k, n, name, traj)
    return num / den


def relativistic_toda(q, e, extra_steps: int = 0) -> tuple[TransformResult, Trajectory]:
    """Bidiagonal--bidiagonal pencil ``(R, L)`` to a tridiagonal matrix.

    Runs ``k = 0 .. N-1`` of::

        f_n      = q_n + e_n          (f_{N-1} = q_{N-1})
        q_0'     = f_0
        q_n'     = q_{n-1} f_n / f_{n-1}
        e_n'     = e_n f_{n+1} / f_n

    and reads off ``q_hat_n = f_n^(n)``, ``e_hat_n = e_n^(n+1)``.
    ``extra_steps`` continues the lattice past the read-out levels.
    """
    q = list(q)
    e = list(e)
    N = len(q)
    if N < 1 or len(e) + 1 != N:
        raise ValueError(f"need len(q) = N >= 1 and len(e) = N-1, got {len(q)} and {len(e)}")
    last = len(e)
    traj = Trajectory(M=1, epsilon=EpsilonVector.ones(N), q=[q], e=[e], d=[None])

    for k in range(N + extra_steps):
        qk, ek = traj.q[k], traj.e[k]
        f = [qn + en for qn, en in zip(qk, ek)]
        f.append(qk[last])
        traj.f.append(f)
        traj.k_max = k

        q_next = [f[0]]
        for n, (q_prev, f_prev, f_n) in enumerate(zip(qk, f, f[1:]), start=1):
            q_next.append(q_prev * _div(f_n, f_prev, k, n, "f[n-1]", traj))
        e_next = []
        for n, (e_n, f_n, f_after) in enumerate(zip(ek, f, f[1:])):
            e_next.append(e_n * _div(f_after, f_n, k, n, "f[n]", traj))
        traj.q.append(q_next)
        traj.e.append(e_next)
        # d coincides with q when every eps is 1
        traj.d.append(q_next)

    q_hat = [traj.f[n][n] for n in range(N)]
    e_hat = [traj.e[n + 1][n] for n in range(last)]
    return TransformResult((q_hat,), e_hat, traj.epsilon), traj


def elementary_toda(
    q, e, eps: EpsilonVector | None = None, extra_steps: int = 0
) -> tuple[TransformResult, Trajectory]:
    """Tridiagonal--bidiagonal pencil ``(L_eps_star R, L_eps)`` to a tridiagonal matrix.

    Runs ``k = 0 .. eta_{N-1}`` and reads ``q_hat_n = f_n^(eta_n)``,
    ``e_hat_n = e_n^(eta_{n+1})``.
    """
    q = list(q)
    e = list(e)
    N = len(q)
    if N < 1 or len(e) + 1 != N:
        raise ValueError(f"need len(q) = N >= 1 and len(e) = N-1, got {len(q)} and {len(e)}")
    if eps is None:
        eps = EpsilonVector.ones(N)
    if len(eps) != len(e):
        raise ValueError("epsilon must have length N-1")
    bits = eps.bits
    eta = eps.eta
    last = len(e)
    traj = Trajectory(M=1, epsilon=eps, q=[q], e=[e], d=[None])

    for k in range(eta[last] + 1 + extra_steps):
        qk, ek = traj.q[k], traj.e[k]
        f = [qn + en if b else qn for qn, en, b in zip(qk, ek, bits)]
        f.append(qk[last])
        traj.f.append(f)
        traj.k_max = k

        d_next, q_next, e_next = [], [], []
        prev = None
        for n in range(N):
            if prev is None:
                d = f[0]
            elif bits[prev]:
                d = qk[prev] * _div(f[n], f[prev], k, n, "f[n-1]", traj)
            else:
                d = d_next[prev] * _div(f[n], q_next[prev], k, n, "q'[n-1]", traj)
            d_next.append(d)
            if n < last:
                q_next.append(d if bits[n] else d + ek[n])
                den = q_next[n] + e_next[prev] if (bits[n] and prev is not None) else q_next[n]
                e_next.append(ek[n] * _div(f[n + 1], den, k, n, "q'[n]+eps e'[n-1]", traj))
            else:
                q_next.append(d)
            prev = n
        traj.q.append(q_next)
        traj.e.append(e_next)
        traj.d.append(d_next)

    q_hat = [traj.f[eta[n]][n] for n in range(N)]
    e_hat = [traj.e[eta[n + 1]][n] for n in range(last)]
    return TransformResult((q_hat,), e_hat, eps), traj


def hungry_toda(spec: PencilSpec, extra_steps: int = 0) -> tuple[TransformResult, Trajectory]:
    """Hessenberg--bidiagonal pencil ``(L_eps_star R^(M-1)...R^(0), L_eps)`` to Hessenberg form.

    Runs ``k = 0 .. (eta_{N-1}+1) M - 1`` (plus ``extra_steps`` further levels,
    which verification uses to reach more polynomial indices) of::

        f_n^(k)     = q_n^(k) + eps_n e_n^(k)
        d_0^(k+M)   = f_0^(k)
        d_n^(k+M)   = d_{n-1}^(k+M) f_n^(k) / q_{n-1}^(k+M)   if eps_{n-1} = 0
                    = q_{n-1}^(k)   f_n^(k) / f_{n-1}^(k)     if eps_{n-1} = 1
        q_n^(k+M)   = d_n^(k+M) + (1 - eps_n) e_n^(k)
        e_n^(k+1)   = e_n^(k) f_{n+1}^(k) / (q_n^(k+M) + eps_n e_{n-1}^(k+1))

    and reads ``q_hat_n^(j) = f_n^(j + eta_n M)`` for ``j < M`` and
    ``e_hat_n = e_n^(eta_{n+1} M)``.
    """
    N, M = spec.N, spec.M
    bits = spec.epsilon.bits
    eta = spec.epsilon.eta
    last = len(bits)
    traj = Trajectory(
        M=M,
        epsilon=spec.epsilon,
        q=[list(row) for row in spec.q],
        e=[list(spec.e)],
        d=[None] * M,
    )

    for k in range((eta[last] + 1) * M + extra_steps):
        qk, ek = traj.q[k], traj.e[k]
        f = [qn + en if b else qn for qn, en, b in zip(qk, ek, bits)]
        f.append(qk[last])
        traj.f.append(f)
        traj.k_max = k

        d_new, q_new, e_new = [], [], []
        prev = None
        for n in range(N):
            if prev is None:
                d = f[0]
            elif bits[prev]:
                d = qk[prev] * _div(f[n], f[prev], k, n, "f[n-1]", traj)
            else:
                d = d_new[prev] * _div(f[n], q_new[prev], k, n, "q(k+M)[n-1]", traj)
            d_new.append(d)
            if n < last:
                q_new.append(d if bits[n] else d + ek[n])
                den = q_new[n] + e_new[prev] if (bits[n] and prev is not None) else q_new[n]
                e_new.append(ek[n] * _div(f[n + 1], den, k, n, "q(k+M)[n]+eps e(k+1)[n-1]", traj))
            else:
                q_new.append(d)
            prev = n
        traj.q.append(q_new)
        traj.e.append(e_new)
        traj.d.append(d_new)

    q_hat = [[traj.f[j + eta[n] * M][n] for n in range(N)] for j in range(M)]
    e_hat = [traj.e[eta[n + 1] * M][n] for n in range(last)]
    return TransformResult(q_hat, e_hat, spec.epsilon), traj


ALGORITHMS = ("auto", "relativistic", "elementary", "hungry")


def transform(spec: PencilSpec, algorithm: str = "auto", extra_steps: int = 0) -> tuple[TransformResult, Trajectory]:
    """Dispatch on the pencil shape.

    ``auto`` picks the relativistic lattice for ``M == 1`` with an all-ones
    mask, the elementary orbits for other ``M == 1`` pencils and the hungry
    orbits for ``M > 1``. Naming an engine forces it where it applies.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm == "auto":
        if spec.M > 1:
            algorithm = "hungry"
        elif spec.epsilon.all_ones():
            algorithm = "relativistic"
        else:
            algorithm = "elementary"
    if algorithm == "hungry":
        return hungry_toda(spec, extra_steps)
    if spec.M != 1:
        raise ValueError(f"the {algorithm} engine handles M = 1 only (got M={spec.M})")
    if algorithm == "relativistic":
        if not spec.epsilon.all_ones():
            raise ValueError("the relativistic engine needs an all-ones epsilon")
        return relativistic_toda(spec.q[0], spec.e, extra_steps)
    return elementary_toda(spec.q[0], spec.e, spec.epsilon, extra_steps)
