"""
Condensation of a Lubin-Tate system by a finite group W of Teichmüller
roots of unity.

The norm series R = prod_{w in W} [w] is invariant under W, and every
endomorphism [a] descends to the unique series Gamma_a with
Gamma_a o R = R o [a]. Gamma_a is read off R o [a] by greedy expansion in
powers of R; a residual that refuses to vanish means R o [a] does not lie in
O[[R]] at the working precision.
"""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from logging import getLogger
from math import gcd

from pydantic import BaseModel

from algebra.errors import (
    NotAGroup,
    NotInSubring,
    OrderNotPrimeToP,
    SpecMismatch,
    TruncationTooSmall,
)
from algebra.series import Series, weierstrass_degree
from algebra.zq import ZqElement, teichmuller
from lubin_tate.formal_group import FormalGroup, endomorphism

LOGGER = getLogger("lubin_tate.condense")

__all__ = (
    "CondensationReport",
    "CondensationSetup",
    "condense",
    "norm_series",
    "verify_condensation_laws",
)


@dataclass(frozen=True)
class CondensationSetup:
    G: FormalGroup
    W: tuple[ZqElement, ...]
    """Teichmüller lifts at the working precision of G."""
    R: Series

    @property
    def d(self) -> int:
        return len(self.W)

    @property
    def leading_unit(self) -> ZqElement:
        """The T^d coefficient of R, the product of W. Never normalised."""
        return self.R[self.d]


def _as_root_of_unity(G: FormalGroup, w: ZqElement|int) -> ZqElement:
    spec = G.working.spec
    if isinstance(w, int):
        w = ZqElement(spec, w)
    elif not spec.same_ring(w.spec):
        raise SpecMismatch(spec, w.spec)
    if not w.is_unit():
        raise NotAGroup(f"{w} is not a unit")
    # Re-lift so the root of unity is exact at the working precision
    lifted = teichmuller(spec, w.residue())
    shared = min(w.spec.precN, spec.precN)
    if lifted.with_precision(shared) != w.with_precision(shared):
        raise NotAGroup(f"{w} is not a Teichmüller representative")
    return lifted


def norm_series(G: FormalGroup, W: Iterable[ZqElement|int]) -> CondensationSetup:
    """
    R = prod_{w in W} [w] for a finite subgroup W of the Teichmüller units.
    Raises NotAGroup if W is not closed under multiplication and
    OrderNotPrimeToP if |W| is divisible by p.
    """
    lifted: list[ZqElement] = []
    for w in W:
        w = _as_root_of_unity(G, w)
        if w not in lifted:
            lifted.append(w)
    if not lifted:
        raise NotAGroup("W is empty")
    d = len(lifted)
    p = G.spec.p
    if gcd(d, p) != 1:
        raise OrderNotPrimeToP(f"|W| = {d} is divisible by p = {p}")
    for w in lifted:
        if w ** d != 1:
            raise NotAGroup(f"{w} does not satisfy w^{d} = 1")
        if not w.is_fixed_by(G.working.phi_power):
            raise NotAGroup(f"{w} is not fixed by phi_{G.working.q}")
        for other in lifted:
            if w * other not in lifted:
                raise NotAGroup(f"W is not closed: {w} * {other} is missing")
    if d >= G.precD:
        raise TruncationTooSmall(f"R has order {d}, the truncation is T^{G.precD}")

    R = Series.monomial(G.spec, 0, G.precD)
    for w in lifted:
        R = R * endomorphism(G, w)
    setup = CondensationSetup(G, tuple(lifted), R)
    if weierstrass_degree(R) != d or R.order() != d:
        raise NotAGroup(f"Norm series {R} does not have order and degree {d}")
    LOGGER.debug("Norm series over |W| = %d: %s", d, R)
    return setup


def condense(setup: CondensationSetup, a: ZqElement|int) -> Series:
    """
    Gamma_a with Gamma_a o R = R o [a], known to T^(M // d).
    Raises NotInSubring if R o [a] fails to expand in powers of R.
    """
    R, d = setup.R, setup.d
    spec = R.spec
    target = R.compose(endomorphism(setup.G, a))
    precT = R.precT // d
    residual = target
    if residual.order() < d:
        raise NotInSubring(0, f"R o [{a}] has order {residual.order()} < {d}")
    coefficients = [ZqElement.zero(spec)]
    power = Series.monomial(spec, 0, R.precT)
    for k in range(1, precT):
        power = power * R
        coefficient = residual[k * d] * power[k * d].invert()
        coefficients.append(coefficient)
        residual = residual - power * coefficient
        if residual.order() < min((k + 1) * d, R.precT):
            raise NotInSubring(
                k,
                f"Residual of R o [{a}] has order {residual.order()} after "
                f"extracting R^{k}, expected at least {(k + 1) * d}"
            )
    gamma = Series(spec, coefficients, precT)
    LOGGER.debug("Gamma_%s = %s", a, gamma)
    return gamma


class CondensationReport(BaseModel):
    composition: dict[str, bool]
    """Gamma_a o Gamma_b = Gamma_ab, keyed "a,b"."""
    derivative: dict[str, bool]
    """Gamma_a'(0) = a^d, keyed "a"."""
    derivativeDetermines: dict[str, bool]
    """Gamma_a = Gamma_b whenever a^d = b^d, keyed "a,b"."""
    commutesWithAlpha: dict[str, bool]
    """Gamma_a o Gamma_alpha = Gamma_alpha o Gamma_a, keyed "a"."""

    @property
    def holds(self) -> bool:
        return all(
            all(results.values())
            for results in (
                self.composition,
                self.derivative,
                self.derivativeDetermines,
                self.commutesWithAlpha,
            )
        )


def _label(a: ZqElement) -> str:
    return a.signed_repr()


def verify_condensation_laws(
        setup: CondensationSetup,
        samples: Sequence[ZqElement|int]
) -> CondensationReport:
    spec = setup.G.working.spec
    elements = [ZqElement(spec, a) if isinstance(a, int) else a.lift(spec) for a in samples]
    gammas = {a: condense(setup, a) for a in elements}
    d = setup.d
    gamma_alpha = condense(setup, setup.G.alpha)

    composition = {}
    for a in elements:
        for b in elements:
            expected = condense(setup, a * b)
            composition[f"{_label(a)},{_label(b)}"] = gammas[a].compose(gammas[b]) == expected

    derivative = {}
    for a, gamma in gammas.items():
        expected = (a ** d).with_precision(gamma.spec.precN)
        derivative[_label(a)] = gamma.derivative_at_zero() == expected

    determines = {}
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if a != b and (a ** d).with_precision(setup.G.precN) == (b ** d).with_precision(setup.G.precN):
                determines[f"{_label(a)},{_label(b)}"] = gammas[a] == gammas[b]

    commutes = {
        _label(a): gamma.compose(gamma_alpha) == gamma_alpha.compose(gamma)
        for a, gamma in gammas.items()
    }
    report = CondensationReport(
        composition=composition,
        derivative=derivative,
        derivativeDetermines=determines,
        commutesWithAlpha=commutes,
    )
    if not report.holds:
        LOGGER.warning("Condensation laws fail: %s", report)
    return report
