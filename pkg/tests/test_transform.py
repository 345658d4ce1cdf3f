import ast
import inspect
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import todapencil.transform as transform_module
from goldens import SEC2_E_HAT, SEC2_Q_HAT, SEC3_E_HAT, SEC3_Q_HAT, SEC4_E_HAT, SEC4_Q_HAT, fr
from todapencil.demos import bidiagonal_demo, hessenberg_demo, tridiagonal_demo
from todapencil.pencil import EpsilonVector, PencilSpec, assemble_pencil, assemble_result
from todapencil.scalar import SubtractionFree
from todapencil.transform import Breakdown, elementary_toda, hungry_toda, relativistic_toda, transform
from todapencil.verify import charpoly

from conftest import random_spec, to_float


def test_relativistic_golden():
    spec = bidiagonal_demo()
    result, traj = relativistic_toda(spec.q[0], spec.e)
    assert list(result.q_hat[0]) == fr(SEC2_Q_HAT)
    assert list(result.e_hat) == fr(SEC2_E_HAT)
    assert traj.k_max == 4


def test_elementary_golden():
    spec = tridiagonal_demo()
    result, traj = elementary_toda(spec.q[0], spec.e, spec.epsilon)
    assert list(result.q_hat[0]) == fr(SEC3_Q_HAT)
    assert list(result.e_hat) == fr(SEC3_E_HAT)
    assert traj.k_max == 3


def test_hungry_golden():
    result, traj = hungry_toda(hessenberg_demo())
    assert [list(r) for r in result.q_hat] == [fr(r) for r in SEC4_Q_HAT]
    assert list(result.e_hat) == fr(SEC4_E_HAT)
    # loop bound (eta_5 + 1) * M - 1 with eta_5 = 3, M = 3
    assert traj.k_max == 11


def test_single_entry():
    result, traj = relativistic_toda([Fraction(5)], [])
    assert result.q_hat == ((5,),) and result.e_hat == ()
    result, _ = elementary_toda([Fraction(5)], [], EpsilonVector(()))
    assert result.q_hat == ((5,),)
    spec = PencilSpec(((Fraction(2),), (Fraction(3),)), (), EpsilonVector(()))
    result, _ = hungry_toda(spec)
    assert result.q_hat == ((2,), (3,))


def test_all_zero_mask_is_identity(rng):
    for _ in range(10):
        spec = random_spec(rng, rng.randint(1, 7), eps=None)
        spec = PencilSpec(spec.q, spec.e, EpsilonVector.zeros(spec.N))
        result, _ = elementary_toda(spec.q[0], spec.e, spec.epsilon)
        assert result.q_hat[0] == spec.q[0] and result.e_hat == spec.e
        assert assemble_result(result) == assemble_pencil(spec)[0]


def test_engines_agree(rng):
    for _ in range(30):
        N = rng.randint(1, 7)
        spec = random_spec(rng, N, eps=(1,) * (N - 1))
        r1, _ = relativistic_toda(spec.q[0], spec.e)
        r2, _ = elementary_toda(spec.q[0], spec.e, spec.epsilon)
        r3, _ = hungry_toda(spec)
        assert r1 == r2 == r3
        spec = random_spec(rng, N)
        assert elementary_toda(spec.q[0], spec.e, spec.epsilon)[0] == hungry_toda(spec)[0]


def test_trajectories_agree_on_shared_levels(rng):
    spec = random_spec(rng, 5, eps=(1, 1, 1, 1))
    _, t1 = relativistic_toda(spec.q[0], spec.e)
    _, t2 = elementary_toda(spec.q[0], spec.e, spec.epsilon)
    assert t1.q == t2.q and t1.e == t2.e and t1.f == t2.f


def test_boundary_conventions(rng):
    spec = random_spec(rng, 6, M=2)
    _, traj = hungry_toda(spec)
    for k, f in enumerate(traj.f):
        assert f[5] == traj.q[k][5]
    for k in range(len(traj.f)):
        # e_{-1} = 0 at every level: f_0 = q_0 + eps_0 e_0 and d_0 = f_0
        assert traj.d[k + spec.M][0] == traj.f[k][0]


def test_isospectral_small_random(rng):
    for _ in range(15):
        spec = random_spec(rng, 4, eps=(1, 1, 1))
        result, _ = relativistic_toda(spec.q[0], spec.e)
        A, B = assemble_pencil(spec)
        assert charpoly(A, B) == charpoly(assemble_result(result))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda N: st.tuples(
            st.just(N),
            st.integers(1, 3),
            st.lists(st.integers(0, 1), min_size=N - 1, max_size=N - 1),
            st.data(),
        )
    )
)
def test_hungry_isospectral_and_positive(args):
    N, M, eps, data = args
    pos = st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=20).filter(lambda x: x > 0)
    q = tuple(tuple(data.draw(pos) for _ in range(N)) for _ in range(M))
    e = tuple(data.draw(pos) for _ in range(N - 1))
    spec = PencilSpec(q, e, EpsilonVector(tuple(eps)))
    result, traj = hungry_toda(spec)
    assert all(x > 0 for x in traj.values())
    assert result.is_positive()
    A, B = assemble_pencil(spec)
    assert charpoly(A, B) == charpoly(assemble_result(result))


def test_breakdown_relativistic():
    with pytest.raises(Breakdown) as info:
        relativistic_toda(fr(["-6", "1", "1"]), fr(["6", "1"]))
    assert (info.value.k, info.value.n) == (0, 1)
    assert info.value.trajectory is not None


def test_breakdown_zero_mask_path():
    spec = PencilSpec((tuple(fr(["-2", "1", "1"])),), tuple(fr(["2", "1"])), EpsilonVector((0, 0)))
    with pytest.raises(Breakdown) as info:
        elementary_toda(spec.q[0], spec.e, spec.epsilon)
    # q'_0 = q_0 + e_0 = 0 is first needed by the e update at n = 0
    assert (info.value.k, info.value.n) == (0, 0)
    assert "q'" in info.value.divisor
    with pytest.raises(Breakdown):
        hungry_toda(spec)


def test_float_mode_matches_exact():
    for spec in (bidiagonal_demo(), tridiagonal_demo(), hessenberg_demo()):
        exact, _ = transform(spec)
        approx, traj = transform(to_float(spec))
        assert all(isinstance(x, float) for x in traj.values())
        pairs = list(zip(sum(exact.q_hat, ()), sum(approx.q_hat, ()))) + list(zip(exact.e_hat, approx.e_hat))
        for x, y in pairs:
            assert abs(y - float(x)) <= 1e-13 * abs(float(x))


def test_runs_on_subtraction_free_scalars(rng):
    for _ in range(5):
        spec = random_spec(rng, 6, M=rng.randint(1, 3))
        wrapped = PencilSpec(
            tuple(tuple(SubtractionFree(x) for x in row) for row in spec.q),
            tuple(SubtractionFree(x) for x in spec.e),
            spec.epsilon,
        )
        plain, _ = hungry_toda(spec)
        guarded, _ = hungry_toda(wrapped)
        assert [[x.value for x in row] for row in guarded.q_hat] == [list(r) for r in plain.q_hat]
        if spec.M == 1:
            elementary_toda(wrapped.q[0], wrapped.e, wrapped.epsilon)
            relativistic_toda(wrapped.q[0], wrapped.e)


def test_transform_module_has_no_minus_sign():
    tree = ast.parse(inspect.getsource(transform_module))
    offenders = [
        node.lineno
        for node in ast.walk(tree)
        if isinstance(node, (ast.Sub, ast.USub))
        or (isinstance(node, ast.Name) and node.id in {"sub", "neg"})
        or (isinstance(node, ast.Attribute) and node.attr in {"__sub__", "__rsub__", "__neg__", "sub", "neg"})
    ]
    assert offenders == []


def test_dispatch():
    assert transform(bidiagonal_demo())[0] == relativistic_toda(bidiagonal_demo().q[0], bidiagonal_demo().e)[0]
    with pytest.raises(ValueError):
        transform(hessenberg_demo(), "elementary")
    with pytest.raises(ValueError):
        transform(tridiagonal_demo(), "relativistic")
    with pytest.raises(ValueError):
        transform(tridiagonal_demo(), "qr")
    assert transform(tridiagonal_demo(), "hungry")[0] == transform(tridiagonal_demo())[0]


def test_extra_steps_do_not_change_result(rng):
    spec = random_spec(rng, 5, M=2)
    r0, t0 = hungry_toda(spec)
    r1, t1 = hungry_toda(spec, extra_steps=4)
    assert r0 == r1 and t1.k_max == t0.k_max + 4
