"""
Semi-conjugacies F^tau o h = h o G between dynamical systems, where tau is a
power of Frobenius acting on the coefficients of F (the identity for
twist 0), and dual isogenies of order 1.
"""
from dataclasses import dataclass
from logging import getLogger
from typing import NamedTuple

from pydantic import BaseModel

from algebra.errors import InputError, NonUnit, NonUnitDerivative, NonzeroConstantTerm, NoSolution, PrecisionExhausted
from algebra.series import INFINITE, Series, comp_inverse, iterate, weierstrass_degree
from algebra.zq import ZqElement
from dynamics.lubin import StableNoninvertible, intertwiner

LOGGER = getLogger("dynamics.semiconj")

__all__ = (
    "DualIsogeny",
    "SemiConjReport",
    "SemiConjTriple",
    "dual_isogeny",
    "solve_semiconj",
    "verify_semiconj",
)


@dataclass(frozen=True)
class SemiConjTriple:
    F: Series
    G: Series
    h: Series
    twist: int = 0

    def __post_init__(self):
        for name, series in (("F", self.F), ("G", self.G), ("h", self.h)):
            if not series.has_zero_constant():
                raise NonzeroConstantTerm(f"{name}(0) = {series.constant()} is not zero")

    @property
    def twisted_F(self) -> Series:
        return self.F.frobenius(self.twist)


class SemiConjReport(BaseModel):
    holds: bool
    firstFailingDegree: int|None
    weierstrassConsistent: bool
    """wdeg(F) * wdeg(h) = wdeg(h) * wdeg(G) where all are finite."""


def verify_semiconj(t: SemiConjTriple) -> SemiConjReport:
    """Compares F^tau o h with h o G modulo (p^N, T^M)."""
    F = t.twisted_F
    degrees = [weierstrass_degree(series) for series in (F, t.G, t.h)]
    consistent = (
        INFINITE in degrees
        or degrees[0] * degrees[2] == degrees[2] * degrees[1]
    )
    if not consistent:
        LOGGER.debug("Weierstrass degrees %s already rule out the relation", degrees)
    failing = F.compose(t.h).first_difference(t.h.compose(t.G))
    report = SemiConjReport(
        holds=failing is None,
        firstFailingDegree=failing,
        weierstrassConsistent=consistent,
    )
    if failing is not None:
        LOGGER.warning("Semi-conjugacy fails at T^%d", failing)
    return report


def solve_semiconj(
        F: StableNoninvertible|Series,
        G: StableNoninvertible|Series,
        c: ZqElement|int,
        twist: int=0
) -> Series:
    """
    The unique h = c*T + O(T^2) with F^tau o h = h o G for a unit c.
    Raises NoSolution with the obstructed degree, at degree 1 if the
    multipliers differ.
    """
    F, G = StableNoninvertible.of(F), StableNoninvertible.of(G)
    unit = ZqElement(F.P.spec, c) if isinstance(c, int) else c
    if not unit.is_unit():
        raise NonUnit(f"h'(0) = {unit} must be a unit")
    if F.lam.valuation() != G.lam.valuation():
        raise NoSolution(
            1, f"Multipliers have valuations {F.lam.valuation()} and {G.lam.valuation()}"
        )
    return intertwiner(F.P.frobenius(twist), G.P, unit, NoSolution)


class DualIsogeny(NamedTuple):
    fcheck: Series
    n: int


def dual_isogeny(f: Series, Q: Series) -> DualIsogeny:
    """
    fcheck with fcheck o f = Q^(o n) for an isogeny f of order 1, where
    n = 0 and fcheck is the compositional inverse.
    """
    if not f.has_zero_constant():
        raise NonzeroConstantTerm(f"f(0) = {f.constant()} is not zero")
    if f.precT < 2 or not f.derivative_at_zero().is_unit():
        raise NonUnitDerivative("Only isogenies of order 1 have a dual here")
    if Q.spec != f.spec:
        raise InputError("f and Q must live in the same ring")
    fcheck = comp_inverse(f)
    precT = min(Q.precT, f.precT)
    if fcheck.compose(f).truncate(precT) != iterate(Q.truncate(precT), 0):
        raise PrecisionExhausted("fcheck o f differs from T")
    return DualIsogeny(fcheck, 0)
