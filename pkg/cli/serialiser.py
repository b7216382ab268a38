"""
JSON forms of every artifact the command line reads or writes.

Each artifact has a pydantic model here; `jsonify` turns a library object into
its model, `dejsonify` turns a model back into the object. Output is always
written with sorted keys so that equal objects give byte-identical text.
"""
import json
from functools import singledispatch
from typing import Any

from pydantic import BaseModel

from algebra.bivariate import BiSeries
from algebra.errors import InputError
from algebra.log_series import LogCoefficient, LogSeries
from algebra.newton import NewtonPolygon
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement
from dynamics.lift_datum import LiftDatum
from dynamics.lubin import StableNoninvertible
from dynamics.semiconj import SemiConjTriple
from lubin_tate.condense import CondensationSetup, condense, norm_series
from lubin_tate.formal_group import FormalGroup, FrobeniusSeries

__all__ = (
    "BiSeriesModel",
    "CondensationModel",
    "ElementModel",
    "FormalGroupModel",
    "FrobeniusModel",
    "LiftDatumModel",
    "LogSeriesModel",
    "NewtonPolygonModel",
    "RingModel",
    "SemiConjModel",
    "SeriesModel",
    "dejsonify",
    "deserialize",
    "dump",
    "element_from_json",
    "element_label",
    "jsonify",
    "serialize",
)


class RingModel(BaseModel):
    p: int
    f: int = 1
    precN: int
    modulus: list[int] = []
    """Little-endian and monic; empty selects the default modulus."""


class ElementModel(RingModel):
    coeffs: list[int]


class SeriesModel(BaseModel):
    ring: RingModel
    precT: int
    coeffs: list[list[int]]


class BiSeriesModel(BaseModel):
    ring: RingModel
    triangle: list[list[list[int]]]
    """Row i holds the coefficients of X^i Y^j for j < precD - i."""


class FrobeniusModel(SeriesModel):
    pi: list[int]
    q: int
    twist: int


class FormalGroupModel(BaseModel):
    frob: FrobeniusModel
    law: BiSeriesModel
    endos: dict[str, SeriesModel]
    alpha: list[int]


class LogCoefficientModel(BaseModel):
    denomExp: int
    unitPart: list[int]


class LogSeriesModel(BaseModel):
    ring: RingModel
    """The smallest ring holding every unit part."""
    precT: int
    absPrec: int
    coeffs: list[LogCoefficientModel]


class LiftDatumModel(BaseModel):
    P: SeriesModel
    members: dict[str, SeriesModel]
    table: dict[str, str] = {}
    """"a,b": "c" asserts F_a o F_b = F_c."""


class SemiConjModel(BaseModel):
    F: SeriesModel
    G: SeriesModel
    h: SeriesModel
    twist: int = 0


class CondensationModel(BaseModel):
    group: FormalGroupModel
    W: list[list[int]]
    R: SeriesModel
    gamma: dict[str, SeriesModel]
    leadingUnit: list[int]


class SegmentModel(BaseModel):
    slope: str
    length: int


class NewtonPolygonModel(BaseModel):
    vertices: list[tuple[int, int]]
    segments: list[SegmentModel]
    provisional: bool


def element_label(a: ZqElement) -> str:
    """Key of an element in JSON maps: its signed representative, a list if f > 1."""
    return a.signed_repr()


def element_from_json(spec: RingSpec, value: Any) -> ZqElement:
    """
    Reads an integer, a coefficient list or a label made by element_label
    into (spec).
    """
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError:
            raise InputError(f"{value!r} is neither an integer nor a coefficient list") from None
    if isinstance(value, bool) or not isinstance(value, (int, list)):
        raise InputError(f"{value!r} is neither an integer nor a coefficient list")
    if isinstance(value, list) and not all(isinstance(c, int) for c in value):
        raise InputError(f"Coefficients of {value!r} must be integers")
    return ZqElement(spec, value)


def _split_pair(key: str) -> tuple[str, str]:
    # Labels of ring elements with f > 1 are lists and contain commas themselves
    depth = 0
    for position, character in enumerate(key):
        if character in "([":
            depth += 1
        elif character in ")]":
            depth -= 1
        elif character == "," and depth == 0:
            return key[:position].strip(), key[position + 1:].strip()
    raise InputError(f"Table key {key!r} is not of the form \"a,b\"")


# Library object -> model

@singledispatch
def jsonify(obj: Any) -> BaseModel:
    """
    Converts a library object into its pydantic model.
    Report models are returned unchanged.
    """
    if isinstance(obj, BaseModel):
        return obj
    raise TypeError(f"No JSON form for {type(obj).__name__}")


@jsonify.register
def _(spec: RingSpec) -> RingModel:
    return RingModel(p=spec.p, f=spec.f, precN=spec.precN, modulus=list(spec.modulus))


@jsonify.register
def _(a: ZqElement) -> ElementModel:
    return ElementModel(**jsonify(a.spec).model_dump(), coeffs=list(a.coeffs))


@jsonify.register
def _(series: Series) -> SeriesModel:
    return SeriesModel(
        ring=jsonify(series.spec),
        precT=series.precT,
        coeffs=[list(c.coeffs) for c in series.coeffs],
    )


@jsonify.register
def _(law: BiSeries) -> BiSeriesModel:
    return BiSeriesModel(
        ring=jsonify(law.spec),
        triangle=[[list(c.coeffs) for c in row] for row in law.coeffs],
    )


@jsonify.register
def _(frob: FrobeniusSeries) -> FrobeniusModel:
    return FrobeniusModel(
        **jsonify(frob.f).model_dump(),
        pi=list(frob.pi.coeffs),
        q=frob.q,
        twist=frob.twist,
    )


@jsonify.register
def _(G: FormalGroup) -> FormalGroupModel:
    return FormalGroupModel(
        frob=jsonify(G.frob),
        law=jsonify(G.law),
        endos={
            element_label(a.with_precision(G.precN)): jsonify(series)
            for a, series in G.endomorphisms()
        },
        alpha=list(G.alpha.with_precision(G.precN).coeffs),
    )


@jsonify.register
def _(log: LogSeries) -> LogSeriesModel:
    top = log.max_denominator()
    return LogSeriesModel(
        ring=jsonify(log.spec.with_precision(log.absPrec + top)),
        precT=log.precT,
        absPrec=log.absPrec,
        coeffs=[
            LogCoefficientModel(denomExp=c.denomExp, unitPart=list(c.unitPart.coeffs))
            for c in log.coeffs
        ],
    )


@jsonify.register
def _(D: LiftDatum) -> LiftDatumModel:
    return LiftDatumModel(
        P=jsonify(D.P.P),
        members={label: jsonify(F) for label, F in D.members.items()},
        table={f"{a},{b}": c for (a, b), c in D.table.items()},
    )


@jsonify.register
def _(t: SemiConjTriple) -> SemiConjModel:
    return SemiConjModel(F=jsonify(t.F), G=jsonify(t.G), h=jsonify(t.h), twist=t.twist)


@jsonify.register
def _(setup: CondensationSetup) -> CondensationModel:
    precN = setup.G.precN
    return CondensationModel(
        group=jsonify(setup.G),
        W=[list(w.with_precision(precN).coeffs) for w in setup.W],
        R=jsonify(setup.R),
        gamma={},
        leadingUnit=list(setup.leading_unit.coeffs),
    )


@jsonify.register
def _(polygon: NewtonPolygon) -> NewtonPolygonModel:
    return NewtonPolygonModel(
        vertices=[tuple(vertex) for vertex in polygon.vertices],
        segments=[
            SegmentModel(slope=str(segment.slope), length=segment.length)
            for segment in polygon.segments
        ],
        provisional=polygon.provisional,
    )


# Model -> library object

@singledispatch
def dejsonify(json_obj: BaseModel) -> Any:
    """Converts a model back into the library object it describes."""
    raise TypeError(f"{type(json_obj).__name__} has no library counterpart")


@dejsonify.register
def _(json_obj: RingModel) -> RingSpec:
    return RingSpec(json_obj.p, json_obj.f, json_obj.precN, tuple(json_obj.modulus))


@dejsonify.register
def _(json_obj: ElementModel) -> ZqElement:
    spec = dejsonify(RingModel(**json_obj.model_dump(exclude={"coeffs"})))
    return ZqElement(spec, json_obj.coeffs)


@dejsonify.register
def _(json_obj: SeriesModel) -> Series:
    spec = dejsonify(json_obj.ring)
    if len(json_obj.coeffs) > json_obj.precT:
        raise InputError(
            f"{len(json_obj.coeffs)} coefficients given for T-precision {json_obj.precT}"
        )
    return Series(spec, (ZqElement(spec, c) for c in json_obj.coeffs), json_obj.precT)


@dejsonify.register
def _(json_obj: BiSeriesModel) -> BiSeries:
    spec = dejsonify(json_obj.ring)
    return BiSeries.from_triangle(
        spec, ([ZqElement(spec, c) for c in row] for row in json_obj.triangle)
    )


@dejsonify.register
def _(json_obj: FrobeniusModel) -> FrobeniusSeries:
    f = dejsonify(SeriesModel(ring=json_obj.ring, precT=json_obj.precT, coeffs=json_obj.coeffs))
    frob = FrobeniusSeries(f, json_obj.q)
    if frob.pi != ZqElement(frob.spec, json_obj.pi) or frob.twist != json_obj.twist:
        raise InputError("pi or twist disagree with the Frobenius series")
    return frob


@dejsonify.register
def _(json_obj: FormalGroupModel) -> FormalGroup:
    G = FormalGroup(dejsonify(json_obj.law), dejsonify(json_obj.frob))
    for label, series in sorted(json_obj.endos.items()):
        G.remember_endomorphism(element_from_json(G.spec, label), dejsonify(series))
    return G


@dejsonify.register
def _(json_obj: LogSeriesModel) -> LogSeries:
    spec = dejsonify(json_obj.ring)
    if len(json_obj.coeffs) != json_obj.precT:
        raise InputError(f"{len(json_obj.coeffs)} coefficients given for T-precision {json_obj.precT}")
    return LogSeries(
        spec,
        (LogCoefficient(c.denomExp, ZqElement(spec, c.unitPart)) for c in json_obj.coeffs),
        json_obj.absPrec,
    )


@dejsonify.register
def _(json_obj: LiftDatumModel) -> LiftDatum:
    return LiftDatum(
        StableNoninvertible(dejsonify(json_obj.P)),
        {label: dejsonify(F) for label, F in json_obj.members.items()},
        {_split_pair(key): c for key, c in json_obj.table.items()},
    )


@dejsonify.register
def _(json_obj: SemiConjModel) -> SemiConjTriple:
    return SemiConjTriple(
        dejsonify(json_obj.F), dejsonify(json_obj.G), dejsonify(json_obj.h), json_obj.twist
    )


@dejsonify.register
def _(json_obj: CondensationModel) -> CondensationSetup:
    G = dejsonify(json_obj.group)
    setup = norm_series(G, (ZqElement(G.spec, w) for w in json_obj.W))
    if setup.R != dejsonify(json_obj.R):
        raise InputError("R does not match the norm series of W")
    for label, gamma in json_obj.gamma.items():
        if condense(setup, element_from_json(G.spec, label)) != dejsonify(gamma):
            raise InputError(f"Gamma_{label} does not match its condensation")
    return setup


def dump(model: BaseModel) -> str:
    """Deterministic text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def serialize(obj: Any) -> str:
    """
    Serializes a library object into a JSON string
    using this module's `jsonify` function.
    """
    return dump(jsonify(obj))


def deserialize[M: BaseModel](string: str, model: type[M]) -> Any:
    """Reads a JSON string of the given model back into a library object."""
    return dejsonify(model.model_validate_json(string))
