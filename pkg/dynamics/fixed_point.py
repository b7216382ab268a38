"""
Moving an interior fixed point of a series to the origin, and the seed
condition of iterate extensions.
"""
from logging import getLogger
from typing import NamedTuple

from algebra.errors import (
    InputError,
    NoInteriorFixedPoint,
    NotDivisible,
    PrecisionExhausted,
)
from algebra.newton import newton_polygon
from algebra.series import Series, reduce_mod_p
from algebra.zq import ZqElement
from config_interpreter import get_config

LOGGER = getLogger("dynamics.fixed_point")

__all__ = (
    "FixedPoint",
    "check_phi_iterate_seed",
    "normalize_fixed_point",
)


class FixedPoint(NamedTuple):
    a: ZqElement
    shifted: Series
    """Q(T + a) - a, stamped where the shift is exact."""


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def normalize_fixed_point(Q: Series) -> FixedPoint:
    """
    Finds the fixed point a of Q in the maximal ideal and returns it with
    the conjugated series Q(T + a) - a.

    The Newton polygon of Q - T has to start with a segment of length 1 and
    negative slope -s; the root then has valuation s and is simple, and a
    Newton iteration from 0 converges to it. If Q'(a) - 1 has valuation e > 0,
    a is only determined modulo p^(N - e) and both outputs are stamped there.
    """
    spec = Q.spec
    if Q.has_zero_constant():
        return FixedPoint(ZqElement.zero(spec), Q)
    if Q.precT < 2:
        raise InputError("The truncation hides the linear term of Q")

    h = Q - Series.identity(spec, Q.precT)
    polygon = newton_polygon(h)
    segments = polygon.segments
    if not segments or segments[0].length != 1 or segments[0].slope >= 0:
        raise NoInteriorFixedPoint(
            None,
            f"Newton polygon of Q - T starts with {segments[0] if segments else 'no segment'}; "
            "a unique fixed point in the maximal ideal needs a length-1 segment of negative slope"
        )
    if polygon.provisional:
        LOGGER.warning("Newton polygon of Q - T is provisional")
    s = int(-segments[0].slope)
    e = h[1].valuation()
    N = spec.precN
    if Q.precT * s < N:
        raise PrecisionExhausted(
            f"Terms beyond T^{Q.precT} are not negligible for a root of valuation {s} at p^{N}"
        )
    settled = N - e
    if settled < 1:
        raise PrecisionExhausted(f"Q'(a) - 1 of valuation {e} leaves no digits of a")

    derivative = h.formal_derivative()
    a = ZqElement.zero(spec)
    cap = get_config()["Solver"]["contraction_cap_factor"] * N
    for iteration in range(cap):
        try:
            step = h.evaluate(a).exact_divide(derivative.evaluate(a))
        except NotDivisible as error:
            raise NoInteriorFixedPoint(None, f"Newton step failed: {error}") from error
        following = a - step
        if following.with_precision(settled) == a.with_precision(settled):
            a = following
            LOGGER.debug("Fixed point settled after %d Newton steps", iteration + 1)
            break
        a = following
    else:
        raise PrecisionExhausted(f"Newton iteration did not settle within {cap} steps")

    # Coefficient k of Q(T + a) misses terms of valuation >= (M - k) * s
    shifted_precT = Q.precT - _ceil_div(N, s) + 1
    shifted = Q.taylor_shift(a) - Series.monomial(spec, 0, Q.precT, a)
    shifted = shifted.truncate(shifted_precT).with_precision(settled)
    if not shifted.has_zero_constant():
        raise PrecisionExhausted(f"Q(a) - a = {shifted.constant()} does not vanish")
    return FixedPoint(a.with_precision(settled), shifted)


def check_phi_iterate_seed(P: Series, d: int, q: int|None=None) -> bool:
    """
    Whether P(0) = 0 and P = T^d mod p, for d a power of q (the residue
    cardinality by default). False as well if T^d lies beyond the truncation.
    """
    q = P.spec.q if q is None else q
    power = 1
    while power < d:
        power *= q
    if power != d:
        raise InputError(f"{d} is not a power of {q}")
    if not P.has_zero_constant():
        return False
    if d >= P.precT:
        LOGGER.warning("T^%d lies beyond the truncation T^%d", d, P.precT)
        return False
    return reduce_mod_p(P) == Series.monomial(P.spec.with_precision(1), d, P.precT)
