from math import comb

import pytest

from algebra.errors import LiteralSyntaxError
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement
from cli.literal import parse_series_literal

SPEC = RingSpec(3, 1, 8)


def test_examples():
    assert parse_series_literal("(1+T)^3-1", SPEC, 6) == Series(SPEC, [0, 3, 3, 1], 6)
    assert parse_series_literal("T", SPEC, 4) == Series.identity(SPEC, 4)
    assert parse_series_literal("2*T + T^2", SPEC, 4) == Series(SPEC, [0, 2, 1], 4)


def test_constants_are_reduced_and_high_terms_dropped():
    series = parse_series_literal("-1 + 3^8*T + T^5", SPEC, 4)
    assert series == Series(SPEC, [-1], 4)


def test_generator_of_the_ring():
    spec = RingSpec(3, 2, 6, (1, 0, 1))
    x = ZqElement.generator(spec)
    series = parse_series_literal("3*x*T + T^3", spec, 5)
    assert series[1] == x * 3
    assert series[3] == 1
    assert parse_series_literal("x^2*T", spec, 3)[1] == ZqElement(spec, -1)


@pytest.mark.parametrize("text, position", [
    ("2*T + $", 6),
    ("(1+T", 0),
    ("1+T)", 3),
    ("T**2", 1),
    ("", 0),
])
def test_errors_carry_positions(text, position):
    with pytest.raises(LiteralSyntaxError) as error:
        parse_series_literal(text, SPEC, 4)
    assert error.value.position == position


@pytest.mark.parametrize("text", ["T^-1", "T^T", "2*+"])
def test_rejected_expressions(text):
    with pytest.raises(LiteralSyntaxError):
        parse_series_literal(text, SPEC, 4)


def test_large_powers_are_truncated_while_expanding():
    exponent = 10 ** 30
    series = parse_series_literal("(1+T)^(10^30) - 1", SPEC, 4)
    assert series == Series(SPEC, [0] + [comb(exponent, k) for k in range(1, 4)], 4)
    assert parse_series_literal("(3*T)^(2^64)", SPEC, 4) == Series.zero(SPEC, 4)
