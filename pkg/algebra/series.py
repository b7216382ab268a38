"""
Truncated power series over a `ZqElement` coefficient ring.

A `Series` knows its coefficients for T^0 .. T^(M-1) modulo p^N and always
reports the pair (N, M). Mixed-precision operands are truncated to the
smaller precision, never padded.
"""
import math
from collections.abc import Iterable, Sequence
from logging import getLogger
from typing import Literal

from algebra.errors import (
    InputError,
    NonUnitDerivative,
    NonzeroConstantTerm,
    SpecMismatch,
)
from algebra.zq import RingSpec, ZqElement

LOGGER = getLogger("algebra.series")

__all__ = (
    "INFINITE",
    "Series",
    "comp_inverse",
    "compose",
    "iterate",
    "reduce_mod_p",
    "series_arith",
    "weierstrass_degree",
)

INFINITE = math.inf
"""Weierstrass degree of a series without unit coefficients below M."""

CoefficientLike = ZqElement|int|Sequence[int]


def _convolve(
        spec: RingSpec,
        a: Sequence[ZqElement],
        b: Sequence[ZqElement],
        length: int
) -> tuple[ZqElement, ...]:
    if spec.f == 1:
        # Plain integers are much faster than element objects here
        pN = spec.pN
        xs = [c.coeffs[0] for c in a[:length]]
        ys = [c.coeffs[0] for c in b[:length]]
        out = [0] * length
        for i, x in enumerate(xs):
            if x:
                for j in range(min(len(ys), length - i)):
                    out[i + j] += x * ys[j]
        return tuple(ZqElement._make(spec, (v % pN,)) for v in out)
    zero = ZqElement.zero(spec)
    out = [zero] * length
    for i, x in enumerate(a[:length]):
        if not x.is_zero():
            for j in range(min(len(b), length - i)):
                out[i + j] = out[i + j] + x * b[j]
    return tuple(out)


class Series:
    """
    Immutable power series truncated at T^precT.

    `coeffs[k]` is the coefficient of T^k; there are exactly `precT` of them.
    """
    __slots__ = ("spec", "precT", "coeffs")
    spec: RingSpec
    precT: int
    coeffs: tuple[ZqElement, ...]

    def __init__(
            self,
            spec: RingSpec,
            coeffs: Iterable[CoefficientLike],
            precT: int|None=None
    ):
        values = [
            c if isinstance(c, ZqElement) else ZqElement(spec, c)
            for c in coeffs
        ]
        for c in values:
            if c.spec != spec:
                raise SpecMismatch(spec, c.spec)
        if precT is None:
            precT = len(values)
        if precT < 1:
            raise InputError(f"T-precision must be >= 1, got {precT}")
        values = values[:precT]
        values.extend([ZqElement.zero(spec)] * (precT - len(values)))
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "precT", precT)
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def _make(cls, spec: RingSpec, coeffs: tuple[ZqElement, ...]) -> "Series":
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "precT", len(coeffs))
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def zero(cls, spec: RingSpec, precT: int) -> "Series":
        return cls(spec, (), precT)

    @classmethod
    def monomial(
            cls,
            spec: RingSpec,
            degree: int,
            precT: int,
            coefficient: CoefficientLike=1
    ) -> "Series":
        coefficients: list[CoefficientLike] = [0] * degree + [coefficient]
        return cls(spec, coefficients, precT)

    @classmethod
    def identity(cls, spec: RingSpec, precT: int) -> "Series":
        """The series T."""
        return cls.monomial(spec, 1, precT)

    @property
    def precision(self) -> tuple[int, int]:
        """The pair (N, M) of p-adic and T-adic precision."""
        return self.spec.precN, self.precT

    def __getitem__(self, k: int) -> ZqElement:
        if 0 <= k < self.precT:
            return self.coeffs[k]
        raise IndexError(f"Coefficient T^{k} is beyond the truncation T^{self.precT}")

    def _check(self, other: "Series") -> int:
        if other.spec != self.spec:
            raise SpecMismatch(self.spec, other.spec)
        return min(self.precT, other.precT)

    # Arithmetic

    def __add__(self, other: "Series") -> "Series":
        length = self._check(other)
        return Series._make(
            self.spec,
            tuple(a + b for a, b in zip(self.coeffs[:length], other.coeffs))
        )

    def __sub__(self, other: "Series") -> "Series":
        length = self._check(other)
        return Series._make(
            self.spec,
            tuple(a - b for a, b in zip(self.coeffs[:length], other.coeffs))
        )

    def __neg__(self) -> "Series":
        return Series._make(self.spec, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "Series|ZqElement|int") -> "Series":
        if isinstance(other, Series):
            length = self._check(other)
            return Series._make(
                self.spec, _convolve(self.spec, self.coeffs, other.coeffs, length)
            )
        return Series._make(self.spec, tuple(a * other for a in self.coeffs))

    def __rmul__(self, other: ZqElement|int) -> "Series":
        return self * other

    def __pow__(self, exponent: int) -> "Series":
        if exponent < 0:
            raise InputError("Negative powers of series are not supported")
        result = Series.monomial(self.spec, 0, self.precT)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.precT == other.precT
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    # Composition

    def compose(self, inner: "Series") -> "Series":
        """
        self(inner(T)) by Horner evaluation in the truncated ring.
        `inner` must have no constant term at precision N.
        """
        length = self._check(inner)
        if not inner.coeffs[0].is_zero():
            raise NonzeroConstantTerm(
                f"Inner series has constant term {inner.coeffs[0]}"
            )
        inner_coeffs = inner.coeffs[:length]
        zero = ZqElement.zero(self.spec)
        # Trailing zeros of the outer series cost nothing
        top = length - 1
        while top > 0 and self.coeffs[top].is_zero():
            top -= 1
        acc: tuple[ZqElement, ...] = (self.coeffs[top],) + (zero,) * (length - 1)
        for k in range(top - 1, -1, -1):
            acc = _convolve(self.spec, acc, inner_coeffs, length)
            acc = (acc[0] + self.coeffs[k],) + acc[1:]
        return Series._make(self.spec, acc)

    def __call__(self, inner: "Series") -> "Series":
        return self.compose(inner)

    # Coefficient-level helpers

    def constant(self) -> ZqElement:
        return self.coeffs[0]

    def derivative_at_zero(self) -> ZqElement:
        if self.precT < 2:
            raise InputError("Truncation T^1 hides the linear coefficient")
        return self.coeffs[1]

    def has_zero_constant(self) -> bool:
        return self.coeffs[0].is_zero()

    def truncate(self, precT: int) -> "Series":
        if precT > self.precT:
            raise InputError(f"Cannot widen T-precision from {self.precT} to {precT}")
        return Series._make(self.spec, self.coeffs[:precT])

    def with_precision(self, precN: int) -> "Series":
        """Stamps the series at a lower p-adic precision."""
        spec = self.spec.with_precision(precN)
        return Series._make(spec, tuple(ZqElement(spec, c.coeffs) for c in self.coeffs))

    def embed(self, spec: RingSpec) -> "Series":
        """Maps a series over Z_p into the unramified ring `spec`."""
        return Series._make(spec, tuple(c.embed(spec) for c in self.coeffs))

    def frobenius(self, times: int=1) -> "Series":
        """Coefficientwise Frobenius, f^phi in the twisted equations."""
        if times % self.spec.f == 0:
            return self
        return Series._make(self.spec, tuple(c.frobenius(times) for c in self.coeffs))

    def divide_by_T(self) -> "Series":
        """f(T)/T for f without constant term; the T-precision drops by one."""
        if not self.has_zero_constant():
            raise NonzeroConstantTerm("Cannot divide a series with constant term by T")
        return Series._make(self.spec, self.coeffs[1:])

    def evaluate(self, point: ZqElement) -> ZqElement:
        """
        Sum of c_k * point^k over the known coefficients.
        Exact mod p^N only if precT * v(point) >= N; callers check this.
        """
        acc = ZqElement.zero(self.spec)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def formal_derivative(self) -> "Series":
        return Series._make(
            self.spec,
            tuple(c * k for k, c in enumerate(self.coeffs))[1:] or (ZqElement.zero(self.spec),)
        )

    def taylor_shift(self, point: ZqElement) -> "Series":
        """The series T -> self(T + point), coefficient by coefficient."""
        length = self.precT
        zero = ZqElement.zero(self.spec)
        out = [zero] * length
        powers = [ZqElement.one(self.spec)]
        for _ in range(length):
            powers.append(powers[-1] * point)
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            for k in range(j + 1):
                out[k] = out[k] + c * (math.comb(j, k) * powers[j - k])
        return Series._make(self.spec, tuple(out))

    def first_difference(self, other: "Series") -> int|None:
        """Lowest T-degree where the two series disagree, None if they agree."""
        length = self._check(other)
        for k in range(length):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    def min_valuation(self) -> int:
        """Minimum coefficient valuation, N for the zero series."""
        return min(c.valuation() for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def order(self) -> int:
        """T-adic order: index of the first nonzero coefficient, precT if none."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return self.precT

    def __repr__(self) -> str:
        return f"Series({self}, N={self.spec.precN})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            value = c.signed_repr()
            if k == 0:
                terms.append(value)
            elif value == "1":
                terms.append("T" if k == 1 else f"T^{k}")
            else:
                terms.append(f"{value}*T" if k == 1 else f"{value}*T^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(T^{self.precT})"


def series_arith(a: Series, b: Series, op: Literal["add", "sub", "mul"]) -> Series:
    """Exact a (op) b modulo (p^N, T^min(M_a, M_b))."""
    match op:
        case "add":
            return a + b
        case "sub":
            return a - b
        case "mul":
            return a * b
    raise InputError(f"Unknown series operation {op!r}")


def compose(outer: Series, inner: Series) -> Series:
    return outer.compose(inner)


def comp_inverse(f: Series) -> Series:
    """
    The series g with g(f(T)) = f(g(T)) = T, solved degree by degree.
    Each step divides only by the unit f'(0).
    """
    if not f.has_zero_constant():
        raise NonzeroConstantTerm("Compositional inverse needs f(0) = 0")
    linear = f.derivative_at_zero()
    if not linear.is_unit():
        raise NonUnitDerivative(f"f'(0) = {linear} is not a unit")
    spec, length = f.spec, f.precT
    inverse_linear = linear.invert()
    zero = ZqElement.zero(spec)
    coefficients = [zero] * length
    coefficients[1] = inverse_linear
    for degree in range(2, length):
        partial = Series._make(spec, tuple(coefficients))
        # f(g) = T + (f1 * c_n + known_n) T^n + ...
        known = f.compose(partial).coeffs[degree]
        coefficients[degree] = -known * inverse_linear
    result = Series._make(spec, tuple(coefficients))
    LOGGER.debug("Compositional inverse of %s is %s", f, result)
    return result


def iterate(f: Series, n: int) -> Series:
    """n-fold self-composition of f; iterate(f, 0) = T."""
    if n < 0:
        raise InputError("Iteration count must be >= 0")
    result = Series.identity(f.spec, f.precT)
    for _ in range(n):
        result = f.compose(result)
    return result


def weierstrass_degree(f: Series) -> int|float:
    """Smallest k with a unit T^k coefficient, INFINITE if none below M."""
    for k, c in enumerate(f.coeffs):
        if c.is_unit():
            return k
    return INFINITE


def reduce_mod_p(f: Series) -> Series:
    """Coefficientwise reduction to the residue field, as a series at precision 1."""
    return f.with_precision(1)
