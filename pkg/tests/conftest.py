import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from todapencil.pencil import EpsilonVector, PencilSpec  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def random_positive(rng: random.Random, bound: int = 20) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


def random_spec(rng: random.Random, N: int, M: int = 1, eps=None, bound: int = 20) -> PencilSpec:
    if eps is None:
        eps = tuple(rng.randint(0, 1) for _ in range(N - 1))
    q = tuple(tuple(random_positive(rng, bound) for _ in range(N)) for _ in range(M))
    e = tuple(random_positive(rng, bound) for _ in range(N - 1))
    return PencilSpec(q, e, EpsilonVector(tuple(eps)))


def to_float(spec: PencilSpec) -> PencilSpec:
    return PencilSpec(tuple(tuple(float(x) for x in r) for r in spec.q), tuple(float(x) for x in spec.e), spec.epsilon)


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
