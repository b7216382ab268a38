from math import comb

import pytest

from algebra.errors import NotAGroup, TruncationTooSmall
from algebra.series import Series, reduce_mod_p, weierstrass_degree
from algebra.zq import RingSpec, ZqElement, teichmuller
from dynamics.fixed_point import check_phi_iterate_seed
from lubin_tate.condense import condense, norm_series, verify_condensation_laws
from lubin_tate.formal_group import FrobeniusSeries, build_formal_group

PREC_N = 6
PREC_D = 16


def multiplicative(p: int, precD: int=PREC_D, frobT: int|None=None):
    working = RingSpec(p, 1, PREC_N + precD - 1)
    frobT = frobT or precD
    f = Series(working, [0] + [comb(p, k) for k in range(1, frobT)], frobT)
    return build_formal_group(FrobeniusSeries(f), precD)


@pytest.mark.parametrize("p", [3, 5])
def test_condensation_of_multiplicative_group(p):
    G = multiplicative(p)
    spec = G.spec
    setup = norm_series(G, [1, -1])
    assert setup.d == 2
    # [1] * [-1] = -T^2 / (1 + T)
    assert setup.R == Series(spec, [0, 0] + [(-1) ** (k - 1) for k in range(2, PREC_D)], PREC_D)
    assert setup.leading_unit == ZqElement(spec, -1)

    gamma_2 = condense(setup, 2)
    assert gamma_2.precT == PREC_D // 2
    assert gamma_2 == Series(spec, [0, 4, -1], PREC_D // 2)
    assert condense(setup, -2) == gamma_2
    assert condense(setup, -3) == condense(setup, 3)
    for a in (2, 3, 4):
        assert condense(setup, a).derivative_at_zero() == ZqElement(spec, a * a)
    assert condense(setup, 2).compose(condense(setup, 3)) == condense(setup, 6)

    gamma_p = condense(setup, p)
    assert reduce_mod_p(gamma_p) == Series.monomial(spec.with_precision(1), p, PREC_D // 2)
    assert check_phi_iterate_seed(gamma_p, p)

    report = verify_condensation_laws(setup, [1, 2, -2])
    assert report.holds
    assert report.derivativeDetermines == {"2,-2": True}
    assert set(report.composition) == {
        f"{a},{b}" for a in ("1", "2", "-2") for b in ("1", "2", "-2")
    }


def test_norm_series_needs_room():
    G = multiplicative(3, precD=2, frobT=4)
    with pytest.raises(TruncationTooSmall):
        norm_series(G, [1, -1])


def test_norm_series_needs_a_group_of_roots_of_unity():
    G = multiplicative(3)
    with pytest.raises(NotAGroup):
        norm_series(G, [1, 2])
    with pytest.raises(NotAGroup):
        norm_series(G, [3])
    with pytest.raises(NotAGroup):
        norm_series(G, [])


def test_fourth_roots_of_unity_at_5():
    G = multiplicative(5)
    W = [teichmuller(G.working.spec, r) for r in range(1, 5)]
    setup = norm_series(G, W)
    assert setup.d == 4
    assert weierstrass_degree(setup.R) == 4
    assert setup.R.order() == 4
    # The product of the fourth roots of unity
    assert setup.leading_unit == -1
    assert condense(setup, 2).derivative_at_zero() == 16
    assert condense(setup, 2) == condense(setup, -2)
