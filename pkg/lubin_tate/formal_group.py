"""
Classical and relative Lubin-Tate formal groups.

A Frobenius series f = pi*T + O(T^2) with f = T^q mod p determines a unique
law S(X, Y) = X + Y + ... with

    S^phi(f(X), f(Y)) = f(S(X, Y))

and, for every a fixed by phi, a unique endomorphism [a] = a*T + O(T^2) with
[a]^phi o f = f o [a]. Here phi is the q-power Frobenius phi_q, acting on
coefficients; it is the identity in the classical case where q is the full
residue cardinality.

Both are solved one (homogeneous) degree at a time with the shared block
solver, which divides by pi once per degree. Results are therefore stamped
(precT - 1) * v(pi) digits below the working precision of f.
"""
from dataclasses import dataclass, field
from logging import getLogger

from pydantic import BaseModel

from algebra.bivariate import BiSeries
from algebra.errors import (
    InputError,
    InvalidFrobeniusSeries,
    NotBaseFixed,
    PrecisionExhausted,
    SpecMismatch,
)
from algebra.series import Series, reduce_mod_p
from algebra.zq import RingSpec, ZqElement, frobenius_exponent, norm_to_base
from lubin_tate._trivariate import associativity_defect
from lubin_tate.block_solver import solve_block, stamped_precision
from util.memo import Memo

LOGGER = getLogger("lubin_tate.formal_group")

__all__ = (
    "FormalGroup",
    "FrobeniusSeries",
    "GroupAxiomReport",
    "build_formal_group",
    "endomorphism",
    "frobenius_chain",
    "verify_frobenius_chain",
    "verify_group_axioms",
)


@dataclass(frozen=True)
class FrobeniusSeries:
    """
    A series f with f(0) = 0, pi = f'(0) in the maximal ideal and
    f = T^q mod p, where q = p^k for a divisor k of f.

    `twist` is h = [E:F] = f/k; h = 1 is the classical case.
    Leaving q at 0 selects the full residue cardinality.
    """
    f: Series
    q: int = 0
    pi: ZqElement = field(init=False)
    twist: int = field(init=False)

    def __post_init__(self):
        spec = self.f.spec
        q = self.q or spec.q
        k = frobenius_exponent(spec, q)
        if not self.f.has_zero_constant():
            raise InvalidFrobeniusSeries(f"f(0) = {self.f.constant()} is not zero")
        if self.f.precT <= q:
            raise InvalidFrobeniusSeries(
                f"Truncation T^{self.f.precT} hides the T^{q} term of f"
            )
        pi = self.f.derivative_at_zero()
        if pi.is_unit() or pi.is_zero():
            raise InvalidFrobeniusSeries(
                f"f'(0) = {pi} must be a nonzero element of the maximal ideal"
            )
        if reduce_mod_p(self.f) != Series.monomial(spec.with_precision(1), q, self.f.precT):
            raise InvalidFrobeniusSeries(f"f is not congruent to T^{q} mod p")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "twist", spec.f // k)

    @property
    def phi_power(self) -> int:
        """phi_q as a power of the absolute Frobenius."""
        return self.f.spec.f // self.twist

    @property
    def spec(self) -> RingSpec:
        return self.f.spec

    def with_precision(self, precN: int) -> "FrobeniusSeries":
        return FrobeniusSeries(self.f.with_precision(precN), self.q)


class FormalGroup:
    """
    A law together with the Frobenius series it was built from.

    `law` and `frob` are stamped at the reported precision, `working` is the
    Frobenius series at the precision the solvers run at. Endomorphisms are
    memoised per (working-precision) element.
    """
    __slots__ = ("law", "frob", "working", "_endomorphisms")

    def __init__(self, law: BiSeries, frob: FrobeniusSeries, working: FrobeniusSeries|None=None):
        if not law.spec.same_ring(frob.spec):
            raise SpecMismatch(law.spec, frob.spec)
        self.law = law
        self.frob = frob
        self.working = working or frob
        self._endomorphisms: Memo[ZqElement, Series] = Memo("endomorphisms")

    @property
    def spec(self) -> RingSpec:
        return self.law.spec

    @property
    def precN(self) -> int:
        return self.law.spec.precN

    @property
    def precD(self) -> int:
        return self.law.precD

    @property
    def alpha(self) -> ZqElement:
        """The norm of pi down to the base, at working precision."""
        return norm_to_base(self.working.pi, self.working.q)

    def endomorphism(self, a: ZqElement|int) -> Series:
        return endomorphism(self, a)

    def endomorphisms(self) -> list[tuple[ZqElement, Series]]:
        """Every endomorphism computed so far."""
        return self._endomorphisms.items()

    def remember_endomorphism(self, a: ZqElement|int, series: Series) -> Series:
        """Seeds the memo with a known [a], e.g. one read back from JSON."""
        a = _lift(a, self.working.spec)
        if series.spec != self.spec:
            raise SpecMismatch(self.spec, series.spec)
        return self._endomorphisms.get_or_compute(a, lambda: series)

    def functional_residual(self) -> BiSeries:
        """S^phi(f(X), f(Y)) - f(S(X, Y)) at the stamped precision."""
        return _functional_residual(self.law, self.frob.f, self.frob.phi_power)

    def __repr__(self) -> str:
        return f"FormalGroup({self.law}, f={self.frob.f}, q={self.frob.q})"


def _functional_residual(law: BiSeries, f: Series, phi_power: int) -> BiSeries:
    return law.frobenius(phi_power).substitute_separately(f, f) - law.outer_compose(f)


def build_formal_group(frob: FrobeniusSeries, precD: int) -> FormalGroup:
    """
    Solves for the law of `frob` below total degree precD.
    The ring of `frob` is the working precision W; the law comes back
    stamped at W - (precD - 1) * v(pi).
    """
    if precD < 1:
        raise InputError(f"Total-degree truncation must be >= 1, got {precD}")
    if frob.f.precT < precD:
        raise InputError(
            f"f is known to T^{frob.f.precT}, the law needs it to T^{precD}"
        )
    spec = frob.spec
    pi, phi_power = frob.pi, frob.phi_power
    target = stamped_precision(spec.precN, precD, pi)
    if target <= pi.valuation():
        raise PrecisionExhausted(
            f"pi of valuation {pi.valuation()} vanishes at the stamped precision {target}"
        )
    f = frob.f.truncate(precD)
    law = BiSeries.additive(spec, precD)
    for degree in range(2, precD):
        window = degree + 1
        residual = _functional_residual(law.truncate(window), f.truncate(window), phi_power)
        pi_n = pi ** degree
        law = law.with_terms({
            (i, j): solve_block(known, pi, pi_n, phi_power, degree)
            for i, j, known in residual.homogeneous(degree)
        })
        LOGGER.debug("Solved degree %d of the law", degree)

    group = FormalGroup(law.with_precision(target), frob.with_precision(target), frob)
    residual = group.functional_residual()
    if (failing := residual.first_difference(BiSeries(residual.spec, residual.precD))) is not None:
        raise PrecisionExhausted(
            f"Functional equation fails at X^{failing[0]} Y^{failing[1]} "
            f"after stamping at p^{target}"
        )
    LOGGER.info(
        "Built formal group over %s to total degree %d (twist %d), stamped at p^%d",
        spec, precD, frob.twist, target
    )
    return group


def _lift(a: ZqElement|int, spec: RingSpec) -> ZqElement:
    return ZqElement(spec, a) if isinstance(a, int) else a.lift(spec)


def endomorphism(G: FormalGroup, a: ZqElement|int) -> Series:
    """
    The endomorphism [a] of G for an `a` fixed by phi_q, stamped at G's
    precision. Raises NotBaseFixed otherwise.
    """
    working = G.working
    a = _lift(a, working.spec)
    if not a.is_fixed_by(working.phi_power):
        raise NotBaseFixed(f"{a} is not fixed by phi_{working.q}")
    return G._endomorphisms.get_or_compute(a, lambda: _solve_endomorphism(G, a))


def _solve_endomorphism(G: FormalGroup, a: ZqElement) -> Series:
    working = G.working
    spec = working.spec
    precT = G.precD
    pi, phi_power = working.pi, working.phi_power
    f = working.f.truncate(precT)
    zero = ZqElement.zero(spec)
    coefficients = ([zero, a] + [zero] * precT)[:precT]
    for degree in range(2, precT):
        window = degree + 1
        g = Series(spec, coefficients[:window])
        f_window = f.truncate(window)
        # [a]^phi(f) - f([a]) with the degree-n unknown still zero
        known = (g.frobenius(phi_power).compose(f_window) - f_window.compose(g))[degree]
        coefficients[degree] = solve_block(known, pi, pi ** degree, phi_power, degree)
    result = Series(spec, coefficients).with_precision(G.precN)

    law = G.law
    if law.outer_compose(result) != law.substitute_separately(result, result):
        raise PrecisionExhausted(
            f"[{a}] is not a homomorphism of the law at p^{G.precN}"
        )
    LOGGER.debug("Endomorphism [%s] = %s", a, result)
    return result


class GroupAxiomReport(BaseModel):
    commutative: bool
    associative: bool
    unital: bool
    residuals: dict[str, int]
    """Valuation of each axiom's defect; the precision N when it holds."""
    failing: dict[str, list[int]]
    """Lowest-degree exponents where an axiom fails."""

    @property
    def holds(self) -> bool:
        return self.commutative and self.associative and self.unital


def verify_group_axioms(G: FormalGroup|BiSeries) -> GroupAxiomReport:
    """
    Checks commutativity, associativity and S(X, 0) = X, S(0, Y) = Y as exact
    identities at the truncation. Accepts a bare law as well as a group.
    """
    law = G.law if isinstance(G, FormalGroup) else G
    precN = law.spec.precN
    residuals: dict[str, int] = {}
    failing: dict[str, list[int]] = {}

    swapped = law.swap()
    residuals["commutative"] = (law - swapped).min_valuation()
    if (index := law.first_difference(swapped)) is not None:
        failing["commutative"] = list(index)

    defect = associativity_defect(law)
    residuals["associative"] = min((c.valuation() for c in defect.values()), default=precN)
    if defect:
        failing["associative"] = list(min(defect, key=lambda monomial: (sum(monomial), monomial)))

    unit_defects = []
    for degree in range(law.precD):
        expected = 1 if degree == 1 else 0
        for index in ((degree, 0), (0, degree)):
            difference = law[index] - expected
            if not difference.is_zero():
                unit_defects.append((index, difference.valuation()))
    residuals["unital"] = min((v for _, v in unit_defects), default=precN)
    if unit_defects:
        failing["unital"] = list(unit_defects[0][0])

    report = GroupAxiomReport(
        commutative="commutative" not in failing,
        associative="associative" not in failing,
        unital="unital" not in failing,
        residuals=residuals,
        failing=failing,
    )
    if not report.holds:
        LOGGER.warning("Group axioms fail at %s", failing)
    return report


def frobenius_chain(G: FormalGroup) -> Series:
    """f^(phi^(h-1)) o ... o f^phi o f at the stamped precision."""
    f = G.frob.f
    chain = f
    for i in range(1, G.frob.twist):
        chain = f.frobenius(G.frob.phi_power * i).compose(chain)
    return chain


def verify_frobenius_chain(G: FormalGroup) -> bool:
    """Whether the chain of twisted Frobenius isogenies is the endomorphism [alpha]."""
    return frobenius_chain(G) == endomorphism(G, G.alpha)
