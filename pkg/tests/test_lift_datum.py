from math import comb

from algebra.series import Series
from algebra.zq import RingSpec
from dynamics.lift_datum import (
    LiftDatum,
    condensed_datum,
    cyclotomic_datum,
    lubin_tate_datum,
    verify_lift_datum,
)
from lubin_tate.condense import norm_series
from lubin_tate.formal_group import FrobeniusSeries, build_formal_group

UNITS = (1, 2, 4, 5, 7, 8)


def group(f: list[int], precN: int=6, precD: int=16):
    working = RingSpec(3, 1, precN + precD - 1)
    return build_formal_group(FrobeniusSeries(Series(working, f, precD)), precD)


def test_cyclotomic_datum_holds():
    datum = cyclotomic_datum(RingSpec(3, 1, 8), 12, UNITS)
    report = verify_lift_datum(datum)
    assert report.holds
    assert report.partial
    assert report.failingDegrees == {}
    assert report.etaValues["2"] == [2]
    assert report.tableRespected["2,4"]


def test_perturbed_member_is_caught():
    spec = RingSpec(3, 1, 8)
    datum = cyclotomic_datum(spec, 12, UNITS)
    perturbed = datum.members["2"] + Series.monomial(spec, 5, 12)
    report = verify_lift_datum(LiftDatum(datum.P, {**datum.members, "2": perturbed}, datum.table))
    assert not report.holds
    assert not report.commutesWithP["2"]
    assert report.failingDegrees["2"] == 5
    assert report.failingDegrees["2,2"] == 5
    assert report.commutesWithP["4"]


def test_lubin_tate_datum_holds():
    G = group([0, 3, 0, 1])
    datum = lubin_tate_datum(G, [1, 2, 4])
    assert datum.P.P == G.frob.f.truncate(G.precD)
    assert verify_lift_datum(datum).holds


def test_condensed_datum_scales_by_square():
    G = group([0] + [comb(3, k) for k in range(1, 16)])
    datum = condensed_datum(norm_series(G, [1, -1]), [1, 2, 4])
    report = verify_lift_datum(datum)
    assert report.holds
    assert report.etaValues == {"1": [1], "2": [4], "4": [16]}
    assert report.tableRespected["2,2"]
