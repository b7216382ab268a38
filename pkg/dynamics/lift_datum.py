"""
Lift data: a stable series P with a family of series F_g commuting with it
and composing like the group they are indexed by,

    F_g o P = P o F_g,        F_a o F_b = F_c   whenever ab = c.

The standard examples are built here: the cyclotomic datum, the endomorphisms
of a Lubin-Tate group and the condensed family of a norm series.
"""
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from logging import getLogger

from pydantic import BaseModel

from algebra.errors import InputError, NonUnitDerivative, NonzeroConstantTerm, SpecMismatch
from algebra.series import Series
from algebra.zq import RingSpec
from dynamics.lubin import StableNoninvertible
from lubin_tate.condense import CondensationSetup, condense
from lubin_tate.formal_group import FormalGroup, endomorphism

LOGGER = getLogger("dynamics.lift_datum")

__all__ = (
    "LiftDatum",
    "LiftDatumReport",
    "binomial_series",
    "condensed_datum",
    "cyclotomic_datum",
    "lubin_tate_datum",
    "verify_lift_datum",
)


@dataclass(frozen=True, eq=False)
class LiftDatum:
    P: StableNoninvertible
    members: Mapping[str, Series]
    table: Mapping[tuple[str, str], str] = field(default_factory=dict)
    """(a, b) -> c asserts F_a o F_b = F_c."""

    def __post_init__(self):
        spec = self.P.P.spec
        for label, F in self.members.items():
            if F.spec != spec:
                raise SpecMismatch(spec, F.spec)
            if not F.has_zero_constant():
                raise NonzeroConstantTerm(f"F_{label}(0) = {F.constant()} is not zero")
            if not F.derivative_at_zero().is_unit():
                raise NonUnitDerivative(f"F_{label}'(0) is not a unit")
        for (a, b), c in self.table.items():
            missing = {a, b, c} - self.members.keys()
            if missing:
                raise InputError(f"Table entry {a},{b} -> {c} names unknown labels {sorted(missing)}")

    @property
    def partial(self) -> bool:
        """True unless the table covers every ordered pair of labels."""
        return len(self.table) < len(self.members) ** 2


class LiftDatumReport(BaseModel):
    commutesWithP: dict[str, bool]
    tableRespected: dict[str, bool]
    etaValues: dict[str, list[int]]
    """F_g'(0) as little-endian coefficients."""
    failingDegrees: dict[str, int]
    """Lowest failing T-degree, keyed by label or "a,b"."""
    partial: bool

    @property
    def holds(self) -> bool:
        return all(self.commutesWithP.values()) and all(self.tableRespected.values())


def verify_lift_datum(D: LiftDatum) -> LiftDatumReport:
    P = D.P.P
    commutes = {}
    respected = {}
    failing = {}
    for label, F in sorted(D.members.items()):
        degree = F.compose(P).first_difference(P.compose(F))
        commutes[label] = degree is None
        if degree is not None:
            failing[label] = degree
    for (a, b), c in sorted(D.table.items()):
        key = f"{a},{b}"
        degree = D.members[a].compose(D.members[b]).first_difference(D.members[c])
        respected[key] = degree is None
        if degree is not None:
            failing[key] = degree
    report = LiftDatumReport(
        commutesWithP=commutes,
        tableRespected=respected,
        etaValues={
            label: list(F.derivative_at_zero().coeffs)
            for label, F in sorted(D.members.items())
        },
        failingDegrees=failing,
        partial=D.partial,
    )
    if not report.holds:
        LOGGER.warning("Lift datum fails at degrees %s", failing)
    return report


def _binomial(n: int, k: int) -> int:
    # Generalised binomial coefficient, also for negative n
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


def binomial_series(spec: RingSpec, c: int, precT: int) -> Series:
    """(1 + T)^c - 1 for any integer c."""
    return Series(spec, [0] + [_binomial(c, k) for k in range(1, precT)], precT)


def _product_table(units: Iterable[int]) -> dict[tuple[str, str], str]:
    units = list(units)
    return {
        (str(a), str(b)): str(a * b)
        for a in units for b in units if a * b in units
    }


def cyclotomic_datum(spec: RingSpec, precT: int, units: Iterable[int]) -> LiftDatum:
    """P = (1 + T)^p - 1 with F_c = (1 + T)^c - 1, so that eta(c) = c."""
    units = list(dict.fromkeys(units))
    return LiftDatum(
        StableNoninvertible(binomial_series(spec, spec.p, precT)),
        {str(c): binomial_series(spec, c, precT) for c in units},
        _product_table(units),
    )


def lubin_tate_datum(G: FormalGroup, units: Iterable[int]) -> LiftDatum:
    """P = [alpha] with F_c = [c] for base-fixed integers c."""
    units = list(dict.fromkeys(units))
    return LiftDatum(
        StableNoninvertible(endomorphism(G, G.alpha)),
        {str(c): endomorphism(G, c) for c in units},
        _product_table(units),
    )


def condensed_datum(setup: CondensationSetup, units: Iterable[int]) -> LiftDatum:
    """P = Gamma_alpha with F_c = Gamma_c, so that eta(c) = c^d."""
    units = list(dict.fromkeys(units))
    return LiftDatum(
        StableNoninvertible(condense(setup, setup.G.alpha)),
        {str(c): condense(setup, c) for c in units},
        _product_table(units),
    )
