"""
Stable noninvertible series and Lubin's rigidity: the logarithm
L_P = lim P^(o n) / lambda^n, the unique commutant with a given derivative,
and the valuations of the roots of the iterates of P.
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from typing import NamedTuple

from algebra.errors import (
    DivisibilityFailure,
    InputError,
    NoCommutant,
    NonzeroConstantTerm,
    NoSolution,
    NotStable,
    ObstructionError,
    PrecisionExhausted,
    TruncationTooSmall,
)
from algebra.log_series import LogSeries
from algebra.newton import newton_polygon
from algebra.series import INFINITE, Series, iterate, weierstrass_degree
from algebra.zq import ZqElement
from config_interpreter import get_config
from lubin_tate.block_solver import solve_block, stamped_precision

LOGGER = getLogger("dynamics.lubin")

__all__ = (
    "LogLimit",
    "StableNoninvertible",
    "commutant",
    "intertwiner",
    "level_slopes",
    "lubin_log",
    "lubin_limit",
    "root_valuation_profile",
)


@dataclass(frozen=True)
class StableNoninvertible:
    """
    P(0) = 0 with lambda = P'(0) a nonzero element of the maximal ideal and
    finite Weierstrass degree below the truncation.
    """
    P: Series
    lam: ZqElement = field(init=False)
    degree: int = field(init=False)

    def __post_init__(self):
        lam = _stable_multiplier(self.P)
        degree = weierstrass_degree(self.P)
        if degree == INFINITE:
            raise NotStable(f"P has no unit coefficient below T^{self.P.precT}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "degree", degree)

    @classmethod
    def of(cls, P: "Series|StableNoninvertible") -> "StableNoninvertible":
        return P if isinstance(P, StableNoninvertible) else cls(P)


class LogLimit(NamedTuple):
    series: LogSeries
    iterations: int
    """Index n of the iterate P^(o n) / lambda^n that was returned."""


def _log_depth(k: int, d: int) -> int:
    # ceil(log_d k) without floating point
    depth, power = 0, 1
    while power < k:
        power *= d
        depth += 1
    return depth


def _stable_multiplier(P: Series) -> ZqElement:
    if not P.has_zero_constant():
        raise NonzeroConstantTerm(f"P(0) = {P.constant()} is not zero")
    lam = P.derivative_at_zero()
    v = lam.valuation()
    if not 1 <= v < P.spec.precN:
        raise NotStable(f"P'(0) = {lam} has valuation {v}, needs 1 <= v < {P.spec.precN}")
    return lam


def lubin_limit(P: StableNoninvertible|Series, effPrec: int) -> LogLimit:
    """
    Iterates P^(o n) / lambda^n until `log_confirmations` consecutive
    iterates agree on every coefficient modulo p^effPrec.

    The n-th iterate is known to p^(N - n*v(lambda)); PrecisionExhausted is
    raised once that drops below effPrec, and also when a settled coefficient
    of T^k carries a denominator beyond lambda^ceil(log_d k). Only lambda is
    constrained here, so a linear P is accepted as well.
    """
    series = P.P if isinstance(P, StableNoninvertible) else P
    lam = _stable_multiplier(series)
    if effPrec < 1:
        raise InputError(f"Effective precision must be >= 1, got {effPrec}")
    spec = series.spec
    v = lam.valuation()
    unit = lam.divide_by_p(v)
    solver_config = get_config()["Solver"]
    max_iterations = solver_config["log_max_iterations"]

    n = 1
    if spec.precN - v < effPrec:
        raise PrecisionExhausted(
            f"P / lambda is only known to p^{spec.precN - v}, {effPrec} digits were requested"
        )
    iterate_n = series
    current = LogSeries.from_scaled(iterate_n, v, unit)
    agreeing = 1
    while agreeing < solver_config["log_confirmations"]:
        n += 1
        if n > max_iterations:
            raise PrecisionExhausted(f"Logarithm did not settle within {max_iterations} iterates")
        if spec.precN - n * v < effPrec:
            raise PrecisionExhausted(
                f"Iterate {n} is only known to p^{spec.precN - n * v}, "
                f"{effPrec} digits were requested"
            )
        iterate_n = series.compose(iterate_n)
        following = LogSeries.from_scaled(iterate_n, n * v, unit ** n)
        if following.agrees_with(current, effPrec):
            agreeing += 1
        else:
            LOGGER.debug(
                "Iterate %d differs from %d at T^%s",
                n, n - 1, following.first_disagreement(current, effPrec)
            )
            agreeing = 1
        current = following

    result = current.with_abs_precision(effPrec)
    degree = weierstrass_degree(series)
    if degree != INFINITE:
        for k, c in enumerate(result.coeffs[1:], start=1):
            bound = v * _log_depth(k, degree)
            if c.denomExp > bound:
                raise PrecisionExhausted(
                    f"Coefficient of T^{k} has denominator p^{c.denomExp} beyond "
                    f"the growth bound p^{bound}"
                )
    LOGGER.debug("Lubin logarithm settled at iterate %d", n)
    return LogLimit(result, n)


def lubin_log(P: StableNoninvertible|Series, effPrec: int) -> LogSeries:
    """The Lubin logarithm L_P = T + O(T^2) with L_P o P = lambda * L_P, modulo p^effPrec."""
    return lubin_limit(P, effPrec).series


def intertwiner(
        F: Series,
        G: Series,
        c: ZqElement|int,
        obstruction: type[ObstructionError]=NoSolution
) -> Series:
    """
    The h = c*T + O(T^2) with F o h = h o G, solved degree by degree:

        h_n * (F'(0) - G'(0)^n) = [h_(<n)(G) - F(h_(<n))]_n

    The result is stamped (M - 1) * v(F'(0)) digits below the ring of F.
    """
    if F.spec != G.spec:
        raise InputError("Both systems must live in the same ring")
    for series in (F, G):
        if not series.has_zero_constant():
            raise NonzeroConstantTerm(f"{series} does not vanish at 0")
    spec = F.spec
    precT = min(F.precT, G.precT)
    F, G = F.truncate(precT), G.truncate(precT)
    c = ZqElement(spec, c) if isinstance(c, int) else c.lift(spec)
    lam_F, lam_G = F.derivative_at_zero(), G.derivative_at_zero()
    target = stamped_precision(spec.precN, precT, lam_F)
    if not c.is_zero() and lam_F != lam_G:
        raise obstruction(
            1, f"Linear terms disagree: F'(0) = {lam_F}, G'(0) = {lam_G}"
        )

    zero = ZqElement.zero(spec)
    coefficients = ([zero, c] + [zero] * precT)[:precT]
    for degree in range(2, precT):
        window = degree + 1
        h = Series(spec, coefficients[:window])
        F_window, G_window = F.truncate(window), G.truncate(window)
        known = (h.compose(G_window) - F_window.compose(h))[degree]
        try:
            coefficients[degree] = solve_block(known, lam_F, lam_G ** degree, 0, degree)
        except DivisibilityFailure as e:
            raise obstruction(degree, *e.args) from e

    h = Series(spec, coefficients).with_precision(target)
    F_stamped, G_stamped = F.with_precision(target), G.with_precision(target)
    if (failing := F_stamped.compose(h).first_difference(h.compose(G_stamped))) is not None:
        raise PrecisionExhausted(
            f"Intertwining relation fails at T^{failing} after stamping at p^{target}"
        )
    return h


def commutant(P: StableNoninvertible|Series, c: ZqElement|int) -> Series:
    """
    The unique g = c*T + O(T^2) commuting with P.
    Raises NoCommutant with the obstructed degree if it does not exist.
    """
    P = StableNoninvertible.of(P)
    g = intertwiner(P.P, P.P, c, NoCommutant)
    LOGGER.debug("Commutant of %s with derivative %s: %s", P.P, c, g)
    return g


def root_valuation_profile(P: StableNoninvertible|Series, n: int) -> list[tuple[Fraction, int]]:
    """
    Slopes and multiplicities of the Newton polygon of P^(o n)(T) / T over
    the degrees below d^n, in increasing order of slope. A slope -s with
    multiplicity m stands for m nonzero roots of valuation s.
    Raises PrecisionExhausted if coefficients that vanish at p^N could
    change the polygon.
    """
    P = StableNoninvertible.of(P)
    if n < 0:
        raise InputError("Iteration count must be >= 0")
    if n == 0:
        return []
    top = P.degree ** n
    if top >= P.P.precT:
        raise TruncationTooSmall(
            f"Iterate {n} has Weierstrass degree {top}, the truncation is T^{P.P.precT}"
        )
    v = P.lam.valuation()
    if n * v >= P.P.spec.precN:
        raise PrecisionExhausted(
            f"lambda^{n} has valuation {n * v}, the constant term of iterate {n} / T "
            f"vanishes at p^{P.P.spec.precN}"
        )
    reduced = iterate(P.P, n).divide_by_T().truncate(top)
    polygon = newton_polygon(reduced)
    if not polygon.settled:
        raise PrecisionExhausted(
            f"Coefficients of iterate {n} outside {polygon} vanish at p^{P.P.spec.precN}"
        )
    return sorted(polygon.slope_multiset().items())


def level_slopes(P: StableNoninvertible|Series, n: int) -> list[tuple[Fraction, int]]:
    """The roots of the n-th iterate that are not roots of the (n-1)-th."""
    if n < 1:
        raise InputError("Levels start at 1")
    current = Counter(dict(root_valuation_profile(P, n)))
    current.subtract(dict(root_valuation_profile(P, n - 1)))
    return sorted((slope, count) for slope, count in current.items() if count > 0)
