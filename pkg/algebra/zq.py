"""
Exact arithmetic in the unramified ring O_E = Z_p[x]/(modulus) modulo p^N.

Exposes the `RingSpec` describing a coefficient ring, the immutable
`ZqElement` living in it, the Frobenius lift and Teichmüller representatives.
"""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cache
from itertools import product
from logging import getLogger
from typing import Self

from sympy import Poly, isprime, symbols

from algebra.errors import (
    InputError,
    InvalidRingSpec,
    NonUnit,
    NotDivisible,
    SpecMismatch,
)

LOGGER = getLogger("algebra.zq")

__all__ = (
    "RingSpec",
    "ZqElement",
    "default_modulus",
    "frobenius_exponent",
    "norm_to_base",
    "teichmuller",
)

_X = symbols("x")


@cache
def _is_irreducible_mod_p(p: int, modulus: tuple[int, ...]) -> bool:
    # sympy wants the leading coefficient first
    return Poly(
        [c % p for c in reversed(modulus)], _X, modulus=p
    ).is_irreducible


@cache
def default_modulus(p: int, f: int) -> tuple[int, ...]:
    """
    Returns the smallest monic irreducible polynomial of degree f over F_p,
    comparing little-endian coefficient vectors lexicographically.
    The result is little-endian and includes the leading 1.
    """
    for low in product(range(p), repeat=f):
        candidate = (*low, 1)
        if _is_irreducible_mod_p(p, candidate):
            return candidate
    raise InvalidRingSpec(f"No irreducible polynomial of degree {f} mod {p}")


@dataclass(frozen=True)
class RingSpec:
    """
    The ring O_E modulo p^precN, where E/Q_p is unramified of degree f.
    `modulus` is little-endian, monic, of degree f and irreducible mod p.
    """
    p: int
    f: int
    precN: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isprime(self.p):
            raise InvalidRingSpec(f"{self.p} is not prime")
        if self.f < 1:
            raise InvalidRingSpec(f"Extension degree must be >= 1, got {self.f}")
        if self.precN < 1:
            raise InvalidRingSpec(f"Precision must be >= 1, got {self.precN}")
        modulus = tuple(self.modulus) or default_modulus(self.p, self.f)
        if len(modulus) != self.f + 1 or modulus[-1] % self.p != 1:
            raise InvalidRingSpec(
                f"Modulus {list(modulus)} is not monic of degree {self.f}"
            )
        modulus = tuple(c % self.pN for c in modulus[:-1]) + (1,)
        if not _is_irreducible_mod_p(self.p, modulus):
            raise InvalidRingSpec(
                f"Modulus {list(modulus)} is reducible mod {self.p}"
            )
        # frozen dataclass: normalised modulus has to be written through object
        object.__setattr__(self, "modulus", modulus)

    @property
    def q(self) -> int:
        """Cardinality of the residue field."""
        return self.p ** self.f

    @property
    def pN(self) -> int:
        return self.p ** self.precN

    def with_precision(self, precN: int) -> "RingSpec":
        return RingSpec(self.p, self.f, precN, self.modulus)

    def prime_subring(self) -> "RingSpec":
        """Z_p modulo p^precN, the f = 1 ring below this one."""
        return RingSpec(self.p, 1, self.precN)

    def same_ring(self, other: "RingSpec") -> bool:
        """Same ring up to precision."""
        return (
            self.p == other.p
            and self.f == other.f
            and all(
                (a - b) % self.p ** min(self.precN, other.precN) == 0
                for a, b in zip(self.modulus, other.modulus)
            )
        )

    def __str__(self) -> str:
        if self.f == 1:
            return f"Z_{self.p} mod {self.p}^{self.precN}"
        return f"Z_{self.p}[x]/({list(self.modulus)}) mod {self.p}^{self.precN}"


def _valuation_int(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


class ZqElement:
    """
    Immutable element of O_E / p^N, stored as f little-endian integer
    coefficients in [0, p^N) with respect to the power basis of `spec.modulus`.
    Integers are accepted as the other operand of every ring operation.
    """
    __slots__ = ("spec", "coeffs")
    spec: RingSpec
    coeffs: tuple[int, ...]

    def __init__(self, spec: RingSpec, coeffs: int|Iterable[int]):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        values = list(coeffs)
        if len(values) > spec.f:
            raise InputError(
                f"Expected at most {spec.f} coefficients, got {len(values)}"
            )
        values.extend([0] * (spec.f - len(values)))
        pN = spec.pN
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", tuple(c % pN for c in values))

    @classmethod
    def _make(cls, spec: RingSpec, coeffs: tuple[int, ...]) -> Self:
        # Trusted constructor: coeffs are already reduced and of length f
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ZqElement is immutable")

    @classmethod
    def zero(cls, spec: RingSpec) -> Self:
        return cls._make(spec, (0,) * spec.f)

    @classmethod
    def one(cls, spec: RingSpec) -> Self:
        return cls._make(spec, (1,) + (0,) * (spec.f - 1))

    @classmethod
    def generator(cls, spec: RingSpec) -> Self:
        """The class of x, the root of the modulus."""
        if spec.f == 1:
            return cls(spec, -spec.modulus[0])
        return cls(spec, (0, 1))

    def _coerce(self, other: "ZqElement|int") -> "ZqElement":
        if isinstance(other, int):
            return ZqElement(self.spec, other)
        if other.spec != self.spec:
            raise SpecMismatch(self.spec, other.spec)
        return other

    # Ring operations

    def __add__(self, other: "ZqElement|int") -> "ZqElement":
        other = self._coerce(other)
        pN = self.spec.pN
        return ZqElement._make(
            self.spec,
            tuple((a + b) % pN for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other: "ZqElement|int") -> "ZqElement":
        other = self._coerce(other)
        pN = self.spec.pN
        return ZqElement._make(
            self.spec,
            tuple((a - b) % pN for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other: int) -> "ZqElement":
        return self._coerce(other) - self

    def __neg__(self) -> "ZqElement":
        pN = self.spec.pN
        return ZqElement._make(self.spec, tuple(-a % pN for a in self.coeffs))

    def __mul__(self, other: "ZqElement|int") -> "ZqElement":
        other = self._coerce(other)
        spec = self.spec
        pN = spec.pN
        f = spec.f
        if f == 1:
            return ZqElement._make(spec, ((self.coeffs[0] * other.coeffs[0]) % pN,))
        product_ = [0] * (2 * f - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    product_[i + j] += a * b
        modulus = spec.modulus
        for degree in range(2 * f - 2, f - 1, -1):
            c = product_[degree]
            if c:
                shift = degree - f
                for i in range(f):
                    product_[shift + i] -= c * modulus[i]
        return ZqElement._make(spec, tuple(c % pN for c in product_[:f]))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "ZqElement":
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = ZqElement.one(self.spec)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ZqElement(self.spec, other)
        if not isinstance(other, ZqElement):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    # p-adic structure

    def valuation(self) -> int:
        """
        Largest k <= N with p^k dividing this element; N for zero.
        The power basis is integral with unit discriminant, so the
        valuation is the minimum over the coefficients.
        """
        p, cap = self.spec.p, self.spec.precN
        return min(_valuation_int(c, p, cap) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def divide_by_p(self, k: int=1) -> "ZqElement":
        """
        Exact division by p^k. The top k digits of the result are unknown
        and come back as zero; callers account for the lost precision.
        """
        if k == 0:
            return self
        v = self.valuation()
        if v < k:
            raise NotDivisible(v, k)
        pk = self.spec.p ** k
        return ZqElement._make(self.spec, tuple(c // pk for c in self.coeffs))

    def exact_divide(self, divisor: "ZqElement") -> "ZqElement":
        """
        Returns self / divisor for a nonzero divisor of valuation v,
        losing v digits of precision. Raises NotDivisible if v(self) < v.
        """
        divisor = self._coerce(divisor)
        v = divisor.valuation()
        if v >= self.spec.precN:
            raise NonUnit(f"Division by an element that is zero mod p^{self.spec.precN}")
        return self.divide_by_p(v) * divisor.divide_by_p(v).invert()

    def invert(self) -> "ZqElement":
        if not self.is_unit():
            raise NonUnit(f"{self} is not a unit")
        spec = self.spec
        if spec.f == 1:
            return ZqElement._make(spec, (pow(self.coeffs[0], -1, spec.pN),))
        # x^(q-2) inverts mod p, Newton doubles the correct digits
        inverse = self ** (spec.q - 2)
        one = ZqElement.one(spec)
        while self * inverse != one:
            inverse = inverse * (2 - self * inverse)
        return inverse

    def frobenius(self, times: int=1) -> "ZqElement":
        """
        The Frobenius lift applied `times` times: the ring endomorphism fixing
        Z_p and lifting y -> y^p on the residue field. Has order f.
        """
        times %= self.spec.f
        if times == 0:
            return self
        powers = _frobenius_generator_powers(self.spec)
        result = self
        for _ in range(times):
            acc = ZqElement.zero(self.spec)
            for coefficient, power in zip(result.coeffs, powers):
                if coefficient:
                    acc = acc + power * coefficient
            result = acc
        return result

    def with_precision(self, precN: int) -> "ZqElement":
        """Reduces to a lower precision. Widening is refused, digits are never invented."""
        if precN > self.spec.precN:
            raise InputError(
                f"Cannot widen precision from {self.spec.precN} to {precN}"
            )
        return ZqElement(self.spec.with_precision(precN), self.coeffs)

    def lift(self, spec: RingSpec) -> "ZqElement":
        """
        This element's representative read in a ring of the same shape,
        possibly at higher precision. The representative is taken as exact.
        """
        if not spec.same_ring(self.spec):
            raise SpecMismatch(self.spec, spec)
        return ZqElement(spec, self.coeffs)

    def embed(self, spec: RingSpec) -> "ZqElement":
        """Maps an element of the prime subring Z_p into the ring `spec`."""
        if self.spec.f != 1 or self.spec.p != spec.p:
            raise SpecMismatch(self.spec, spec)
        if spec.precN > self.spec.precN:
            raise InputError("Embedding cannot widen precision")
        return ZqElement(spec, (self.coeffs[0],))

    def residue(self) -> tuple[int, ...]:
        """Coefficients of the reduction mod p."""
        return tuple(c % self.spec.p for c in self.coeffs)

    def is_fixed_by(self, exponent: int) -> bool:
        """Whether the `exponent`-th power of Frobenius fixes this element."""
        return self.frobenius(exponent) == self

    def to_int(self) -> int:
        """The integer representative in [0, p^N) of an element of Z_p."""
        if any(self.coeffs[1:]):
            raise InputError(f"{self} does not lie in Z_p")
        return self.coeffs[0]

    def signed_repr(self) -> str:
        half = self.spec.pN // 2
        parts = [c - self.spec.pN if c > half else c for c in self.coeffs]
        if self.spec.f == 1:
            return str(parts[0])
        return str(parts)

    def __repr__(self) -> str:
        return f"ZqElement({list(self.coeffs)} in {self.spec})"

    def __str__(self) -> str:
        if self.spec.f == 1:
            return str(self.coeffs[0])
        return str(list(self.coeffs))


def _evaluate_modulus(spec: RingSpec, y: ZqElement, derivative: bool=False) -> ZqElement:
    coefficients = list(spec.modulus)
    if derivative:
        coefficients = [i * c for i, c in enumerate(coefficients)][1:]
    acc = ZqElement.zero(spec)
    for c in reversed(coefficients):
        acc = acc * y + c
    return acc


@cache
def _frobenius_generator_powers(spec: RingSpec) -> tuple[ZqElement, ...]:
    """
    Powers sigma(x)^i, i < f, where sigma(x) is the root of the modulus
    congruent to x^p mod p, found by Newton iteration.
    """
    x = ZqElement.generator(spec)
    root = x ** spec.p
    while True:
        step = _evaluate_modulus(spec, root) * _evaluate_modulus(spec, root, True).invert()
        if step.is_zero():
            break
        root = root - step
    LOGGER.debug("Frobenius of the generator in %s is %s", spec, root)
    powers = [ZqElement.one(spec)]
    for _ in range(spec.f - 1):
        powers.append(powers[-1] * root)
    return tuple(powers)


def teichmuller(spec: RingSpec, residue: int|Sequence[int]) -> ZqElement:
    """
    The unique lift t of a residue with t^q = t, found by iterating
    x -> x^q from the naive lift until it is stable.
    """
    if isinstance(residue, int):
        residue = (residue,)
    lift = ZqElement(spec, [r % spec.p for r in residue])
    while True:
        following = lift ** spec.q
        if following == lift:
            return lift
        lift = following


def frobenius_exponent(spec: RingSpec, q: int) -> int:
    """
    The exponent k with q = p^k, such that phi_q is the k-th power of the
    absolute Frobenius. k must divide f.
    """
    k, power = 0, 1
    while power < q:
        power *= spec.p
        k += 1
    if power != q or k == 0 or spec.f % k:
        raise InputError(f"q={q} is not p^k for a divisor k of f={spec.f}")
    return k


def norm_to_base(x: ZqElement, q: int) -> ZqElement:
    """
    Norm from O_E to the subring fixed by phi_q: the product of the
    phi_q-conjugates of x.
    """
    k = frobenius_exponent(x.spec, q)
    result = x
    conjugate = x
    for _ in range(x.spec.f // k - 1):
        conjugate = conjugate.frobenius(k)
        result = result * conjugate
    return result
