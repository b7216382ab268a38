from fractions import Fraction
from random import Random

import pytest

from algebra.errors import (
    InputError,
    NoInteriorFixedPoint,
    NotStable,
    PrecisionExhausted,
    TruncationTooSmall,
)
from algebra.log_series import LogSeries
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement
from dynamics.fixed_point import check_phi_iterate_seed, normalize_fixed_point
from dynamics.lift_datum import binomial_series
from dynamics.lubin import (
    StableNoninvertible,
    commutant,
    level_slopes,
    lubin_limit,
    lubin_log,
    root_valuation_profile,
)

UNITS = (1, 2, 4, 5, 7, 8)


def test_log_of_multiplicative_series():
    spec = RingSpec(3, 1, 30)
    P = binomial_series(spec, 3, 16)
    limit = lubin_limit(P, 5)
    assert limit.iterations > 1
    log = limit.series
    assert log.absPrec == 5
    expected = LogSeries.from_rationals(
        spec, [0] + [Fraction((-1) ** (k + 1), k) for k in range(1, 16)], 5
    )
    assert log.agrees_with(expected, 5)
    # 1/9 is the largest denominator below T^16
    assert log.max_denominator() == 2
    assert log.compose(P).agrees_with(log.scale(ZqElement(spec, 3)), 5)


def test_log_functional_equation():
    spec = RingSpec(3, 1, 30)
    P = Series(spec, [0, 3, 0, 1], 10)
    log = lubin_log(P, 4)
    assert log.coeffs[1].unitPart == ZqElement(spec, 1)
    assert log.coeffs[1].denomExp == 0
    assert log.compose(P).agrees_with(log.scale(P.derivative_at_zero()), 4)


def test_log_of_linear_series():
    spec = RingSpec(5, 1, 12)
    log = lubin_log(Series(spec, [0, 5], 6), 6)
    assert log.agrees_with(LogSeries.from_rationals(spec, [0, 1, 0, 0, 0, 0], 6), 6)


def test_commutant_of_multiplicative_series():
    spec = RingSpec(3, 1, 20)
    g = commutant(binomial_series(spec, 3, 8), 2)
    assert g == Series(RingSpec(3, 1, 13), [0, 2, 1], 8)


def test_commutants_compose():
    rng = Random(5)
    spec = RingSpec(3, 1, 20)
    P = StableNoninvertible(Series(spec, [0, 3, 0, 1], 8))
    for _ in range(10):
        a, b = rng.choice(UNITS), rng.choice(UNITS)
        assert commutant(P, a).compose(commutant(P, b)) == commutant(P, a * b)


def test_log_intertwines_commutant():
    spec = RingSpec(3, 1, 30)
    P = Series(spec, [0, 3, 0, 1], 8)
    g = commutant(P, 2)
    log = lubin_log(P.with_precision(g.spec.precN), 4)
    assert log.compose(g).agrees_with(log.scale(ZqElement(g.spec, 2)), 4)


def test_unstable_series_are_rejected():
    spec = RingSpec(3, 1, 10)
    with pytest.raises(NotStable):
        StableNoninvertible(Series(spec, [0, 1, 0, 1], 6))
    with pytest.raises(NotStable):
        StableNoninvertible(Series(spec, [0, 3, 3, 3], 6))
    with pytest.raises(NotStable):
        lubin_log(Series(spec, [0, 0, 1], 6), 3)


def test_normalize_fixed_point():
    spec = RingSpec(3, 1, 3)
    interior = [a for a in range(27) if a % 3 == 0 and (3 + 2 * a + a ** 3) % 27 == 0]
    assert interior == [12]
    fixed = normalize_fixed_point(Series(spec, [3, 3, 0, 1], 8))
    assert fixed.a == ZqElement(spec, 12)
    assert fixed.shifted.precT == 6
    # Q'(12) = 3 + 3 * 144
    assert fixed.shifted == Series(spec, [0, 3, 9, 1], 6)


def test_normalize_without_interior_fixed_point():
    spec = RingSpec(3, 1, 5)
    origin = Series(spec, [0, 3, 1], 6)
    assert normalize_fixed_point(origin).a.is_zero()
    with pytest.raises(NoInteriorFixedPoint):
        normalize_fixed_point(Series(spec, [1, 0, 1], 6))


def test_seed_check():
    spec = RingSpec(3, 1, 6)
    P = binomial_series(spec, 3, 12)
    assert check_phi_iterate_seed(P, 3)
    assert not check_phi_iterate_seed(P, 9)
    assert not check_phi_iterate_seed(P + Series.monomial(spec, 4, 12), 3)
    assert not check_phi_iterate_seed(binomial_series(spec, 3, 3), 3)
    with pytest.raises(InputError):
        check_phi_iterate_seed(P, 4)


def test_root_profile_of_multiplicative_iterates():
    P = binomial_series(RingSpec(3, 1, 10), 3, 32)
    assert root_valuation_profile(P, 0) == []
    assert root_valuation_profile(P, 1) == [(Fraction(-1, 2), 2)]
    assert root_valuation_profile(P, 2) == [(Fraction(-1, 2), 2), (Fraction(-1, 6), 6)]
    assert level_slopes(P, 1) == [(Fraction(-1, 2), 2)]
    assert level_slopes(P, 2) == [(Fraction(-1, 6), 6)]
    with pytest.raises(TruncationTooSmall):
        root_valuation_profile(P, 4)


def test_root_profile_refuses_vanishing_constant_term():
    P = binomial_series(RingSpec(3, 1, 3), 3, 32)
    assert root_valuation_profile(P, 2) == [(Fraction(-1, 2), 2), (Fraction(-1, 6), 6)]
    # lambda^3 = 27 vanishes mod 27, which would hide the slope -1/2 level
    with pytest.raises(PrecisionExhausted):
        root_valuation_profile(P, 3)
    with pytest.raises(PrecisionExhausted):
        level_slopes(P, 3)


def test_root_profile_with_exact_interior_zeros():
    P = Series(RingSpec(3, 1, 10), [0, 3, 0, 1], 12)
    assert root_valuation_profile(P, 1) == [(Fraction(-1, 2), 2)]


def test_log_denominator_beyond_growth_bound(monkeypatch):
    monkeypatch.setattr("dynamics.lubin._log_depth", lambda k, d: 0)
    with pytest.raises(PrecisionExhausted):
        lubin_limit(binomial_series(RingSpec(3, 1, 30), 3, 8), 5)
