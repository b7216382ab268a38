"""
Series with bounded p-power denominators, such as the Lubin logarithm.

Each coefficient is stored as unit_part * p^(-denomExp). The whole series
carries one absolute precision `absPrec`: every coefficient is known modulo
p^absPrec. Equality is only ever tested at a stated effective precision.
"""
from collections.abc import Iterable
from fractions import Fraction
from logging import getLogger
from typing import NamedTuple

from algebra.errors import InputError, PrecisionExhausted, SpecMismatch
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement

LOGGER = getLogger("algebra.log_series")

__all__ = (
    "LogCoefficient",
    "LogSeries",
)


class LogCoefficient(NamedTuple):
    denomExp: int
    unitPart: ZqElement

    def valuation(self) -> int:
        """Valuation of the represented value; large for zero."""
        return self.unitPart.valuation() - self.denomExp


def _normalise(value: ZqElement, denomExp: int) -> LogCoefficient:
    if value.is_zero():
        return LogCoefficient(0, value)
    shift = min(value.valuation(), denomExp)
    return LogCoefficient(denomExp - shift, value.divide_by_p(shift))


class LogSeries:
    """
    Truncated series with coefficients in E, each of the form u * p^-e.
    `absPrec` must satisfy absPrec + max(e) <= N of the ring.
    """
    __slots__ = ("spec", "precT", "coeffs", "absPrec")
    spec: RingSpec
    precT: int
    coeffs: tuple[LogCoefficient, ...]
    absPrec: int

    def __init__(self, spec: RingSpec, coeffs: Iterable[LogCoefficient], absPrec: int):
        values = tuple(coeffs)
        top = max((c.denomExp for c in values), default=0)
        if absPrec + top > spec.precN:
            raise PrecisionExhausted(
                f"Absolute precision {absPrec} with denominators p^{top} "
                f"needs {absPrec + top} digits, ring has {spec.precN}"
            )
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "precT", len(values))
        object.__setattr__(self, "coeffs", values)
        object.__setattr__(self, "absPrec", absPrec)

    def __setattr__(self, name, value):
        raise AttributeError("LogSeries is immutable")

    @classmethod
    def from_scaled(cls, series: Series, shift: int, unit: ZqElement) -> "LogSeries":
        """series / (p^shift * unit), known modulo p^(N - shift)."""
        if not unit.is_unit():
            raise InputError("Scaling factor must be a unit")
        inverse = unit.invert()
        return cls(
            series.spec,
            (_normalise(c * inverse, shift) for c in series.coeffs),
            series.spec.precN - shift,
        )

    @classmethod
    def from_series(cls, series: Series) -> "LogSeries":
        return cls.from_scaled(series, 0, ZqElement.one(series.spec))

    @classmethod
    def from_rationals(cls, spec: RingSpec, values: Iterable[Fraction|int], absPrec: int) -> "LogSeries":
        """Rational coefficients mapped into E, for comparison against exact oracles."""
        coefficients = []
        for value in values:
            value = Fraction(value)
            numerator, denominator = value.numerator, value.denominator
            e = 0
            while denominator % spec.p == 0:
                denominator //= spec.p
                e += 1
            unit = ZqElement(spec, numerator) * ZqElement(spec, denominator).invert()
            coefficients.append(_normalise(unit, e))
        return cls(spec, coefficients, absPrec)

    @property
    def precision(self) -> tuple[int, int]:
        return self.absPrec, self.precT

    def max_denominator(self) -> int:
        return max((c.denomExp for c in self.coeffs), default=0)

    def _check(self, other: "LogSeries") -> int:
        if other.spec != self.spec:
            raise SpecMismatch(self.spec, other.spec)
        return min(self.precT, other.precT)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        length = self._check(other)
        out = []
        for a, b in zip(self.coeffs[:length], other.coeffs):
            top = max(a.denomExp, b.denomExp)
            p = self.spec.p
            difference = (
                a.unitPart * p ** (top - a.denomExp) - b.unitPart * p ** (top - b.denomExp)
            )
            out.append(_normalise(difference, top))
        return LogSeries(self.spec, out, min(self.absPrec, other.absPrec))

    def scale(self, factor: ZqElement) -> "LogSeries":
        """factor * self for an integral factor."""
        return LogSeries(
            self.spec,
            (_normalise(c.unitPart * factor, c.denomExp) for c in self.coeffs),
            self.absPrec,
        )

    def compose(self, inner: Series) -> "LogSeries":
        """self(inner(T)) for an integral inner series without constant term."""
        top = self.max_denominator()
        p = self.spec.p
        integral = Series(
            self.spec,
            (c.unitPart * p ** (top - c.denomExp) for c in self.coeffs),
        )
        composed = integral.compose(inner)
        return LogSeries(
            self.spec,
            (_normalise(c, top) for c in composed.coeffs),
            self.absPrec,
        )

    def with_abs_precision(self, absPrec: int) -> "LogSeries":
        """
        Forgets digits beyond p^absPrec: each unit part is reduced modulo
        p^(absPrec + denomExp), which keeps units units.
        """
        if absPrec > self.absPrec:
            raise PrecisionExhausted(
                f"Cannot widen absolute precision from {self.absPrec} to {absPrec}"
            )
        p = self.spec.p
        coefficients = []
        for c in self.coeffs:
            modulus = p ** (absPrec + c.denomExp)
            reduced = ZqElement(self.spec, (x % modulus for x in c.unitPart.coeffs))
            coefficients.append(_normalise(reduced, c.denomExp))
        return LogSeries(self.spec, coefficients, absPrec)

    def truncate(self, precT: int) -> "LogSeries":
        return LogSeries(self.spec, self.coeffs[:precT], self.absPrec)

    def residual_valuation(self) -> int:
        """Smallest coefficient valuation, capped at the absolute precision."""
        return min(
            (min(c.valuation(), self.absPrec) for c in self.coeffs if not c.unitPart.is_zero()),
            default=self.absPrec,
        )

    def agrees_with(self, other: "LogSeries", effPrec: int) -> bool:
        """Whether all coefficients agree modulo p^effPrec."""
        if effPrec > min(self.absPrec, other.absPrec):
            raise PrecisionExhausted(
                f"Comparison at {effPrec} digits but operands are known to "
                f"{self.absPrec} and {other.absPrec}"
            )
        return (self - other).residual_valuation() >= effPrec

    def first_disagreement(self, other: "LogSeries", effPrec: int) -> int|None:
        difference = self - other
        for k, c in enumerate(difference.coeffs):
            if not c.unitPart.is_zero() and c.valuation() < effPrec:
                return k
        return None

    def to_fractions(self) -> list[Fraction]:
        """
        Rational representatives of Z_p coefficients, using the signed
        representative of the unit part modulo p^(absPrec + denomExp).
        """
        if self.spec.f != 1:
            raise InputError("Rational representatives only exist over Z_p")
        out = []
        for c in self.coeffs:
            modulus = self.spec.p ** (self.absPrec + c.denomExp)
            value = c.unitPart.coeffs[0] % modulus
            if value > modulus // 2:
                value -= modulus
            out.append(Fraction(value, self.spec.p ** c.denomExp))
        return out

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.unitPart.is_zero():
                continue
            value = c.unitPart.signed_repr()
            if c.denomExp:
                value = f"{value}/{self.spec.p}^{c.denomExp}"
            terms.append(value if k == 0 else f"({value})*T^{k}")
        return (" + ".join(terms) or "0") + f" + O(T^{self.precT}) [mod p^{self.absPrec}]"
