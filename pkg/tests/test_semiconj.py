from math import comb
from random import Random

import pytest

from algebra.errors import NonUnit, NonUnitDerivative, NoSolution
from algebra.series import Series, comp_inverse
from algebra.zq import RingSpec, ZqElement
from dynamics.semiconj import SemiConjTriple, dual_isogeny, solve_semiconj, verify_semiconj
from lubin_tate.condense import condense, norm_series
from lubin_tate.formal_group import FrobeniusSeries, build_formal_group, endomorphism


def conjugated(spec: RingSpec, precT: int=8):
    G = Series(spec, [0, 3, 0, 1], precT)
    v = Series(spec, [0, 1, 1], precT)
    return comp_inverse(v).compose(G).compose(v), G, v


def test_norm_series_semiconjugates():
    working = RingSpec(3, 1, 21)
    f = Series(working, [0] + [comb(3, k) for k in range(1, 16)], 16)
    setup = norm_series(build_formal_group(FrobeniusSeries(f), 16), [1, -1])
    triple = SemiConjTriple(condense(setup, 2), endomorphism(setup.G, 2), setup.R)
    report = verify_semiconj(triple)
    assert report.holds
    assert report.firstFailingDegree is None
    assert report.weierstrassConsistent


def test_solve_recovers_conjugacy():
    spec = RingSpec(3, 1, 20)
    F, G, v = conjugated(spec)
    h = solve_semiconj(F, G, 1)
    assert h.spec.precN == 13
    assert h == comp_inverse(v).with_precision(13)
    assert verify_semiconj(SemiConjTriple(F.with_precision(13), G.with_precision(13), h)).holds


def test_perturbed_semiconjugacy_fails():
    spec = RingSpec(3, 1, 13)
    F, G, v = conjugated(spec)
    h = comp_inverse(v) + Series.monomial(spec, 4, 8)
    report = verify_semiconj(SemiConjTriple(F, G, h))
    assert not report.holds
    assert report.firstFailingDegree == 4


def test_twisted_semiconjugacy():
    spec = RingSpec(3, 2, 8)
    F = Series(spec, [0, ZqElement.generator(spec) * 3, 0, 1], 8)
    identity = Series.identity(spec, 8)
    assert verify_semiconj(SemiConjTriple(F, F.frobenius(1), identity, 1)).holds
    untwisted = verify_semiconj(SemiConjTriple(F, F.frobenius(1), identity))
    assert untwisted.firstFailingDegree == 1


def test_solve_reports_obstructions():
    spec = RingSpec(3, 1, 20)
    F = Series(spec, [0, 3, 0, 1], 8)
    with pytest.raises(NoSolution) as raised:
        solve_semiconj(F, Series(spec, [0, 9, 0, 1], 8), 1)
    assert raised.value.degree == 1
    with pytest.raises(NoSolution):
        solve_semiconj(F, Series(spec, [0, 6, 0, 1], 8), 1)
    with pytest.raises(NonUnit):
        solve_semiconj(F, F, 3)


def test_dual_isogeny_of_order_one():
    rng = Random(13)
    spec = RingSpec(3, 1, 10)
    Q = Series(spec, [0, 3, 0, 1], 8)
    for _ in range(10):
        f = Series(spec, [0, rng.choice((1, 2, 4, 5))] + [rng.randrange(3 ** 10) for _ in range(6)], 8)
        dual = dual_isogeny(f, Q)
        assert dual.n == 0
        assert dual.fcheck.compose(f) == Series.identity(spec, 8)
    with pytest.raises(NonUnitDerivative):
        dual_isogeny(Q, Q)
