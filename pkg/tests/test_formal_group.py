from math import comb
from random import Random

import pytest

from algebra.bivariate import BiSeries, bi_eval
from algebra.errors import InvalidFrobeniusSeries, NotBaseFixed, PrecisionExhausted
from algebra.series import Series, reduce_mod_p
from algebra.zq import RingSpec, ZqElement
from lubin_tate.block_solver import guard_digits
from lubin_tate.formal_group import (
    FrobeniusSeries,
    build_formal_group,
    endomorphism,
    frobenius_chain,
    verify_frobenius_chain,
    verify_group_axioms,
)


def binomial(spec: RingSpec, c: int, precT: int) -> Series:
    return Series(spec, [0] + [comb(c, k) for k in range(1, precT)], precT)


def multiplicative(p: int, precN: int, precD: int):
    working = RingSpec(p, 1, precN + precD - 1)
    return build_formal_group(FrobeniusSeries(binomial(working, p, precD)), precD)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_multiplicative_group(p):
    G = multiplicative(p, 8, 16)
    spec = RingSpec(p, 1, 8)
    assert G.spec == spec
    assert G.law == BiSeries(spec, 16, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    for a in sorted({1, 2, 3, p}):
        assert endomorphism(G, a) == binomial(spec, a, 16)


def test_axioms_and_chain_classical():
    G = multiplicative(3, 6, 10)
    report = verify_group_axioms(G)
    assert report.holds
    assert report.residuals["commutative"] == 6
    assert report.failing == {}
    # Classical case: [pi] is f itself
    assert frobenius_chain(G) == G.frob.f
    assert verify_frobenius_chain(G)


def test_broken_law_is_reported():
    spec = RingSpec(3, 1, 6)
    law = BiSeries(spec, 6, {(1, 0): 1, (0, 1): 1, (2, 1): 1})
    report = verify_group_axioms(law)
    assert not report.commutative
    assert report.failing["commutative"] == [1, 2]
    assert not report.holds


def test_non_associative_law_is_reported():
    law = BiSeries(RingSpec(3, 1, 6), 6, {(1, 0): 1, (0, 1): 1, (2, 2): 1})
    report = verify_group_axioms(law)
    assert report.commutative
    assert report.unital
    assert not report.associative
    # The associativity defect starts with 2XYZ^2 - 2X^2YZ
    assert sum(report.failing["associative"]) == 4


def test_endomorphism_ring_laws():
    rng = Random(11)
    precN, precD = 6, 16
    working = RingSpec(3, 1, precN + precD - 1)
    G = build_formal_group(FrobeniusSeries(Series(working, [0, 3, 0, 1], precD)), precD)
    for _ in range(20):
        a, b = rng.choice((2, 4, 5)), rng.choice((2, 4, 5))
        ea, eb = endomorphism(G, a), endomorphism(G, b)
        assert ea.compose(eb) == endomorphism(G, a * b)
        assert bi_eval(G.law, ea, eb) == endomorphism(G, a + b)
    assert endomorphism(G, 2) is endomorphism(G, 2)
    # [pi] reduces to Frobenius
    assert reduce_mod_p(endomorphism(G, 3)) == Series.monomial(RingSpec(3, 1, 1), 3, precD)


def quadratic(precN: int) -> RingSpec:
    return RingSpec(3, 2, precN, (1, 0, 1))


def test_twisted_construction():
    precN, precD = 6, 12
    working = quadratic(precN + guard_digits(precD, ZqElement(quadratic(2), 3)))
    omega = ZqElement.generator(working)
    f = Series(working, [0, omega * 3, 0, 1], precD)
    G = build_formal_group(FrobeniusSeries(f, 3), precD)
    assert G.frob.twist == 2
    assert G.spec == quadratic(precN)
    assert G.functional_residual() == BiSeries(G.spec, precD)
    assert verify_group_axioms(G).holds
    # alpha = 3w * phi(3w) = -9 w^2 = 9
    assert G.alpha == ZqElement(working, 9)
    assert verify_frobenius_chain(G)
    assert reduce_mod_p(endomorphism(G, G.alpha)) == Series.monomial(quadratic(1), 9, precD)
    with pytest.raises(NotBaseFixed):
        endomorphism(G, omega)


def test_twisted_path_agrees_with_classical():
    precN, precD = 6, 12
    W = precN + precD - 1
    classical = build_formal_group(
        FrobeniusSeries(Series(RingSpec(3, 1, W), [0, 3, 0, 1], precD)), precD
    )
    twisted = build_formal_group(
        FrobeniusSeries(Series(quadratic(W), [0, 3, 0, 1], precD), 3), precD
    )
    assert twisted.frob.twist == 2
    assert twisted.law == classical.law.embed(twisted.spec)
    for a in (2, 4, 5, 7, -1):
        assert endomorphism(twisted, a) == endomorphism(classical, a).embed(twisted.spec)


def test_invalid_frobenius_series():
    spec = RingSpec(3, 1, 8)
    with pytest.raises(InvalidFrobeniusSeries):
        FrobeniusSeries(Series(spec, [0, 1, 0, 1], 6))
    with pytest.raises(InvalidFrobeniusSeries):
        FrobeniusSeries(Series(spec, [0, 3, 1], 6))
    with pytest.raises(InvalidFrobeniusSeries):
        FrobeniusSeries(Series(spec, [0, 3, 0, 1], 3))


def test_too_little_working_precision():
    working = RingSpec(3, 1, 5)
    with pytest.raises(PrecisionExhausted):
        build_formal_group(FrobeniusSeries(binomial(working, 3, 10)), 10)
