from fractions import Fraction

import pytest

from goldens import SEC2_EIGS, SEC2_T_HAT, SEC3_EIGS, SEC4_EIGS, SEC4_H_HAT
from todapencil.demos import bidiagonal_demo, hessenberg_demo, tridiagonal_demo
from todapencil.pencil import EpsilonVector, TransformResult, assemble_pencil, assemble_result, identity
from todapencil.polyseq import Polynomial
from todapencil.transform import transform
from todapencil.verify import (
    MissingMoments,
    charpoly,
    check_tau_formulas,
    determinant,
    isospectral_report,
    moments_from_pencil,
    moments_from_tridiagonal,
    real_roots,
    squarefree_decomposition,
    tau,
)

from conftest import random_spec

X = Polynomial([0, 1])


def test_determinant_small():
    assert determinant([[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]) == 1
    assert determinant([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]) == -1
    assert determinant([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 0


def test_charpoly_identity_and_triangular():
    assert charpoly(identity(3, Fraction(1))) == (X - 1) * (X - 1) * (X - 1)
    A = [[Fraction(2), Fraction(5)], [Fraction(0), Fraction(3)]]
    assert charpoly(A) == Polynomial.from_roots([2, 3])
    B = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(1)]]
    assert charpoly(A, B) == Polynomial.from_roots([1, 3])


def test_charpoly_rejects_floats():
    with pytest.raises(TypeError):
        charpoly([[1.0]])


def test_sec2_pencil_matches_printed_matrix():
    A, B = assemble_pencil(bidiagonal_demo())
    assert charpoly(A, B) == charpoly(SEC2_T_HAT)


def test_isospectral_report_on_goldens():
    for factory in (bidiagonal_demo, tridiagonal_demo, hessenberg_demo):
        spec = factory()
        result, _ = transform(spec)
        report = isospectral_report(spec, result, tol=1e-10)
        assert report.equal
        assert len(report.roots.roots) == spec.N


def test_moments():
    mu = moments_from_tridiagonal(identity(3, Fraction(1)), 6)
    assert [mu[m] for m in range(6)] == [1] * 6
    mu = moments_from_tridiagonal(SEC2_T_HAT, 4)
    assert mu[0] == 1 and mu[1] == 7
    with pytest.raises(MissingMoments):
        mu[4]


def test_moments_are_linear_in_power():
    T = [[Fraction(2), Fraction(1)], [Fraction(3), Fraction(5)]]
    mu = moments_from_tridiagonal(T, 5)
    # Cayley-Hamilton: T^2 = 7 T - 7 I
    for m in range(3):
        assert mu[m + 2] == 7 * mu[m + 1] - 7 * mu[m]


def test_tau_small_orders():
    mu = moments_from_tridiagonal(SEC2_T_HAT, 6)
    assert tau(mu, 0, 0) == 1
    assert tau(mu, 1, 0) == 1
    assert tau(mu, 1, 1) == 7
    assert tau(mu, 2, 0) == mu[0] * mu[2] - mu[1] * mu[1]


@pytest.mark.parametrize("factory", [bidiagonal_demo, tridiagonal_demo])
def test_tau_formulas_goldens(factory):
    result, _ = transform(factory())
    report = check_tau_formulas(result)
    assert report.passed, report.failures()
    assert len(report.q_hat) == result.N


def test_tau_formulas_label_does_not_matter():
    result, _ = transform(tridiagonal_demo())
    assert check_tau_formulas(result, k=4).passed


def test_tau_formulas_from_pencil_detect_a_wrong_entry():
    spec = bidiagonal_demo()
    result, _ = transform(spec)
    q = list(result.q_hat[0])
    q[2] = q[2] * 2
    bad = TransformResult((tuple(q),), result.e_hat, result.epsilon)
    assert check_tau_formulas(result, spec=spec).passed
    assert check_tau_formulas(bad, spec=spec).failures() == ["q_hat[2]"]
    # output moments only certify the read-out of T_hat, which any factorization passes
    assert check_tau_formulas(bad).passed


def test_pencil_moments_match_output_moments(rng):
    for _ in range(15):
        spec = random_spec(rng, rng.randint(1, 6))
        result, _ = transform(spec)
        mine = moments_from_tridiagonal(assemble_result(result), 8).mu
        assert moments_from_pencil(spec, 8).mu == mine


def test_tau_formulas_single_and_hungry():
    one = TransformResult(((Fraction(3),),), (), EpsilonVector(()))
    assert check_tau_formulas(one).passed
    result, _ = transform(hessenberg_demo())
    with pytest.raises(ValueError):
        check_tau_formulas(result)


def test_tau_formulas_random(rng):
    for _ in range(20):
        spec = random_spec(rng, rng.randint(1, 5))
        result, _ = transform(spec)
        assert check_tau_formulas(result).passed
        assert check_tau_formulas(result, spec=spec).passed


def test_real_roots_simple():
    report = real_roots(X * X - 3 * X + 2)
    assert report.roots == pytest.approx([1, 2], abs=1e-10)
    assert report.all_real_simple


def test_real_roots_multiple_and_complex():
    p = (X - 1) * (X - 1) * (X * X + 1) * (X + 3)
    report = real_roots(p)
    assert report.roots == pytest.approx([-3, 1])
    assert report.multiplicities == [1, 2]
    assert report.nonreal == 2
    assert report.non_simple == 4
    factors = dict((m, f) for f, m in squarefree_decomposition(p))
    assert factors[2] == X - 1


@pytest.mark.parametrize(
    "factory, eigs, rel",
    [(bidiagonal_demo, SEC2_EIGS, 1e-6), (tridiagonal_demo, SEC3_EIGS, 1e-6), (hessenberg_demo, SEC4_EIGS, 1e-6)],
)
def test_printed_eigenvalues(factory, eigs, rel):
    A, B = assemble_pencil(factory())
    roots = real_roots(charpoly(A, B), 1e-12).roots
    assert roots == pytest.approx(sorted(eigs), rel=rel)


def test_sec4_printed_matrix_spectrum():
    A, B = assemble_pencil(hessenberg_demo())
    assert charpoly(A, B) == charpoly(SEC4_H_HAT)
