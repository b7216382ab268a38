"""
The one equation every degree-by-degree construction of this toolkit solves:

    lam * c - mu * phi(c) = known

for an unknown coefficient c, where lam has positive valuation, v(mu) > v(lam)
and phi is a power of Frobenius (or the identity). Each solve divides by lam
once, which costs v(lam) digits of precision.
"""
from logging import getLogger

from algebra.errors import DivisibilityFailure, NotDivisible, PrecisionExhausted
from algebra.zq import ZqElement
from config_interpreter import get_config

LOGGER = getLogger("lubin_tate.block_solver")

__all__ = (
    "guard_digits",
    "solve_block",
    "stamped_precision",
)


def guard_digits(precT: int, divisor: ZqElement) -> int:
    """Digits lost by a solver dividing by `divisor` once per degree below precT."""
    return max(precT - 1, 0) * divisor.valuation()


def stamped_precision(working: int, precT: int, divisor: ZqElement) -> int:
    """
    The precision results of a per-degree solver are reported at.
    Raises PrecisionExhausted if the guard digits eat the whole ring.
    """
    target = working - guard_digits(precT, divisor)
    if target < 1:
        raise PrecisionExhausted(
            f"Working precision {working} cannot absorb "
            f"{guard_digits(precT, divisor)} guard digits for T-precision {precT}"
        )
    return target


def solve_block(
        known: ZqElement,
        lam: ZqElement,
        mu: ZqElement,
        frobenius_power: int,
        degree: int
) -> ZqElement:
    """
    Solves lam * c - mu * phi(c) = known with phi the `frobenius_power`-th
    power of Frobenius (0 or a multiple of f for the identity).

    Untwisted, c = known / (lam - mu). Twisted, c is the fixed point of
    c -> (known + mu * phi(c)) / lam, which contracts because v(mu / lam) > 0.
    """
    spec = known.spec
    try:
        if frobenius_power % spec.f == 0:
            return known.exact_divide(lam - mu)
        cap = get_config()["Solver"]["contraction_cap_factor"] * spec.precN
        c = ZqElement.zero(spec)
        for iteration in range(cap):
            following = (known + mu * c.frobenius(frobenius_power)).exact_divide(lam)
            if following == c:
                LOGGER.debug(
                    "Degree %d block converged after %d iterations", degree, iteration
                )
                return c
            c = following
    except NotDivisible as e:
        raise DivisibilityFailure(
            degree,
            f"Degree {degree}: known term of valuation {e.valuation} "
            f"is not divisible by p^{e.required}"
        ) from e
    raise PrecisionExhausted(
        f"Degree {degree}: contraction did not settle within {cap} iterations"
    )
