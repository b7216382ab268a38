import json
from math import comb

import pytest
from pydantic import ValidationError

from algebra.errors import InputError
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement
from cli.serialiser import (
    CondensationModel,
    FormalGroupModel,
    LiftDatumModel,
    LogSeriesModel,
    SemiConjModel,
    SeriesModel,
    deserialize,
    element_from_json,
    jsonify,
    serialize,
)
from dynamics.lift_datum import cyclotomic_datum
from dynamics.lubin import lubin_log
from dynamics.semiconj import SemiConjTriple
from lubin_tate.condense import condense, norm_series
from lubin_tate.formal_group import FrobeniusSeries, build_formal_group, endomorphism


def multiplicative_group(precN: int=6, precD: int=12):
    working = RingSpec(3, 1, precN + precD - 1)
    f = Series(working, [0] + [comb(3, k) for k in range(1, precD)], precD)
    return build_formal_group(FrobeniusSeries(f), precD)


def test_formal_group_round_trip():
    G = multiplicative_group()
    endomorphism(G, 2)
    endomorphism(G, -1)
    text = serialize(G)
    assert set(json.loads(text)["endos"]) == {"2", "-1"}
    again = deserialize(text, FormalGroupModel)
    assert again.law == G.law
    assert endomorphism(again, 2) == endomorphism(G, 2)
    assert serialize(again) == text


def test_condensation_round_trip():
    setup = norm_series(multiplicative_group(), [1, -1])
    gamma = condense(setup, 2)
    model = jsonify(setup).model_copy(update={"gamma": {"2": jsonify(gamma)}})
    text = json.dumps(model.model_dump(mode="json"), sort_keys=True)
    again = deserialize(text, CondensationModel)
    assert again.R == setup.R
    assert condense(again, 2) == gamma
    assert again.leading_unit == ZqElement(setup.R.spec, -1)


def test_condensation_with_wrong_gamma():
    setup = norm_series(multiplicative_group(), [1, -1])
    gamma = condense(setup, 2) + Series.monomial(setup.R.spec, 3, 6)
    model = jsonify(setup).model_copy(update={"gamma": {"2": jsonify(gamma)}})
    with pytest.raises(InputError):
        deserialize(model.model_dump_json(), CondensationModel)


def test_lift_datum_round_trip():
    datum = cyclotomic_datum(RingSpec(3, 1, 6), 10, [1, 2, 4])
    text = serialize(datum)
    assert json.loads(text)["table"]["2,2"] == "4"
    again = deserialize(text, LiftDatumModel)
    assert again.table == datum.table
    assert serialize(again) == text


def test_twisted_labels_survive():
    spec = RingSpec(3, 2, 4)
    label = ZqElement(spec, [1, -1]).signed_repr()
    assert label == "[1, -1]"
    assert element_from_json(spec, label) == ZqElement(spec, [1, -1])
    with pytest.raises(InputError):
        element_from_json(spec, "one")


def test_semiconj_and_log_round_trip():
    spec = RingSpec(3, 1, 20)
    P = Series(spec, [0, 3, 0, 1], 6)
    triple = SemiConjTriple(P, P, Series.identity(spec, 6), 0)
    text = serialize(triple)
    assert serialize(deserialize(text, SemiConjModel)) == text

    log = lubin_log(P, 3)
    text = serialize(log)
    assert json.loads(text)["ring"]["precN"] == log.absPrec + log.max_denominator()
    assert serialize(deserialize(text, LogSeriesModel)) == text


def test_malformed_series_is_rejected():
    with pytest.raises(ValidationError):
        deserialize("{\"ring\": {\"p\": 3}}", SeriesModel)
    with pytest.raises(InputError):
        deserialize(
            json.dumps({"ring": {"p": 3, "precN": 4}, "precT": 1, "coeffs": [[0], [1]]}),
            SeriesModel,
        )
