"""
Bivariate power series S(X, Y) truncated by total degree.
Formal group laws live here.
"""
from collections.abc import Iterable, Mapping
from logging import getLogger

from algebra.errors import InputError, NonzeroConstantTerm, SpecMismatch
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement

LOGGER = getLogger("algebra.bivariate")

__all__ = (
    "BiSeries",
    "bi_eval",
)

Triangle = tuple[tuple[ZqElement, ...], ...]


def _bivariate_product(spec: RingSpec, a: Triangle, b: Triangle, precD: int) -> Triangle:
    if spec.f == 1:
        pN = spec.pN
        out = [[0] * (precD - i) for i in range(precD)]
        left = [
            (i, j, c.coeffs[0])
            for i, row in enumerate(a[:precD]) for j, c in enumerate(row) if c.coeffs[0]
        ]
        right = [
            (i, j, c.coeffs[0])
            for i, row in enumerate(b[:precD]) for j, c in enumerate(row) if c.coeffs[0]
        ]
        for i1, j1, x in left:
            for i2, j2, y in right:
                if i1 + i2 + j1 + j2 < precD:
                    out[i1 + i2][j1 + j2] += x * y
        return tuple(
            tuple(ZqElement._make(spec, (v % pN,)) for v in row) for row in out
        )
    zero = ZqElement.zero(spec)
    grid = [[zero] * (precD - i) for i in range(precD)]
    left = [
        (i, j, c) for i, row in enumerate(a[:precD]) for j, c in enumerate(row) if not c.is_zero()
    ]
    right = [
        (i, j, c) for i, row in enumerate(b[:precD]) for j, c in enumerate(row) if not c.is_zero()
    ]
    for i1, j1, x in left:
        for i2, j2, y in right:
            if i1 + i2 + j1 + j2 < precD:
                grid[i1 + i2][j1 + j2] = grid[i1 + i2][j1 + j2] + x * y
    return tuple(tuple(row) for row in grid)


class BiSeries:
    """
    Immutable series in X and Y known for all monomials X^i Y^j with
    i + j < precD. `coeffs[i][j]` is the coefficient of X^i Y^j.
    """
    __slots__ = ("spec", "precD", "coeffs")
    spec: RingSpec
    precD: int
    coeffs: Triangle

    def __init__(
            self,
            spec: RingSpec,
            precD: int,
            terms: Mapping[tuple[int, int], ZqElement|int]|None=None
    ):
        if precD < 1:
            raise InputError(f"Total-degree truncation must be >= 1, got {precD}")
        zero = ZqElement.zero(spec)
        grid = [[zero] * (precD - i) for i in range(precD)]
        for (i, j), value in (terms or {}).items():
            if i + j >= precD:
                continue
            if not isinstance(value, ZqElement):
                value = ZqElement(spec, value)
            elif value.spec != spec:
                raise SpecMismatch(spec, value.spec)
            grid[i][j] = value
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "precD", precD)
        object.__setattr__(self, "coeffs", tuple(tuple(row) for row in grid))

    @classmethod
    def _make(cls, spec: RingSpec, coeffs: Triangle) -> "BiSeries":
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "precD", len(coeffs))
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def from_triangle(cls, spec: RingSpec, rows: Iterable[Iterable[ZqElement|int]]) -> "BiSeries":
        rows = [list(row) for row in rows]
        precD = len(rows)
        terms = {}
        for i, row in enumerate(rows):
            if len(row) != precD - i:
                raise InputError(
                    f"Row {i} of a triangle of degree {precD} must have {precD - i} entries"
                )
            for j, value in enumerate(row):
                terms[(i, j)] = value
        return cls(spec, precD, terms)

    def __setattr__(self, name, value):
        raise AttributeError("BiSeries is immutable")

    @classmethod
    def additive(cls, spec: RingSpec, precD: int) -> "BiSeries":
        """The law X + Y."""
        return cls(spec, precD, {(1, 0): 1, (0, 1): 1})

    @property
    def precision(self) -> tuple[int, int]:
        return self.spec.precN, self.precD

    def __getitem__(self, index: tuple[int, int]) -> ZqElement:
        i, j = index
        if i < 0 or j < 0 or i + j >= self.precD:
            raise IndexError(f"X^{i} Y^{j} is beyond total degree {self.precD}")
        return self.coeffs[i][j]

    def terms(self) -> Iterable[tuple[int, int, ZqElement]]:
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                yield i, j, c

    def _check(self, other: "BiSeries") -> int:
        if other.spec != self.spec:
            raise SpecMismatch(self.spec, other.spec)
        return min(self.precD, other.precD)

    def __add__(self, other: "BiSeries") -> "BiSeries":
        precD = self._check(other)
        return BiSeries._make(self.spec, tuple(
            tuple(a + b for a, b in zip(self.coeffs[i][:precD - i], other.coeffs[i]))
            for i in range(precD)
        ))

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        precD = self._check(other)
        return BiSeries._make(self.spec, tuple(
            tuple(a - b for a, b in zip(self.coeffs[i][:precD - i], other.coeffs[i]))
            for i in range(precD)
        ))

    def __mul__(self, other: "BiSeries|ZqElement|int") -> "BiSeries":
        if isinstance(other, BiSeries):
            precD = self._check(other)
            return BiSeries._make(
                self.spec, _bivariate_product(self.spec, self.coeffs, other.coeffs, precD)
            )
        return BiSeries._make(
            self.spec, tuple(tuple(c * other for c in row) for row in self.coeffs)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def has_zero_constant(self) -> bool:
        return self.coeffs[0][0].is_zero()

    def swap(self) -> "BiSeries":
        """S(Y, X)."""
        precD = self.precD
        return BiSeries._make(self.spec, tuple(
            tuple(self.coeffs[j][i] for j in range(precD - i))
            for i in range(precD)
        ))

    def frobenius(self, times: int=1) -> "BiSeries":
        if times % self.spec.f == 0:
            return self
        return BiSeries._make(self.spec, tuple(
            tuple(c.frobenius(times) for c in row) for row in self.coeffs
        ))

    def truncate(self, precD: int) -> "BiSeries":
        if precD > self.precD:
            raise InputError(f"Cannot widen total degree from {self.precD} to {precD}")
        return BiSeries._make(self.spec, tuple(row[:precD - i] for i, row in enumerate(self.coeffs[:precD])))

    def with_precision(self, precN: int) -> "BiSeries":
        spec = self.spec.with_precision(precN)
        return BiSeries._make(spec, tuple(
            tuple(ZqElement(spec, c.coeffs) for c in row) for row in self.coeffs
        ))

    def embed(self, spec: RingSpec) -> "BiSeries":
        return BiSeries._make(spec, tuple(
            tuple(c.embed(spec) for c in row) for row in self.coeffs
        ))

    def homogeneous(self, degree: int) -> list[tuple[int, int, ZqElement]]:
        """The monomials of the given total degree, as (i, j, coefficient)."""
        return [(i, degree - i, self.coeffs[i][degree - i]) for i in range(degree + 1)]

    def with_terms(self, terms: Mapping[tuple[int, int], ZqElement]) -> "BiSeries":
        """Copy with the given coefficients replaced."""
        grid = [list(row) for row in self.coeffs]
        for (i, j), value in terms.items():
            grid[i][j] = value
        return BiSeries._make(self.spec, tuple(tuple(row) for row in grid))

    def first_difference(self, other: "BiSeries") -> tuple[int, int]|None:
        """Lowest-total-degree monomial where the two disagree."""
        precD = self._check(other)
        for degree in range(precD):
            for i in range(degree + 1):
                if self.coeffs[i][degree - i] != other.coeffs[i][degree - i]:
                    return i, degree - i
        return None

    def min_valuation(self) -> int:
        return min(c.valuation() for _, _, c in self.terms())

    def outer_compose(self, outer: Series) -> "BiSeries":
        """outer(S(X, Y)) by Horner evaluation in the bivariate truncated ring."""
        if not self.has_zero_constant():
            raise NonzeroConstantTerm("Inner law has a constant term")
        if outer.spec != self.spec:
            raise SpecMismatch(self.spec, outer.spec)
        precD = min(self.precD, outer.precT)
        inner = self.truncate(precD)
        top = precD - 1
        while top > 0 and outer.coeffs[top].is_zero():
            top -= 1
        acc = BiSeries(self.spec, precD, {(0, 0): outer.coeffs[top]})
        for k in range(top - 1, -1, -1):
            acc = acc * inner
            acc = acc.with_terms({(0, 0): acc.coeffs[0][0] + outer.coeffs[k]})
        return acc

    def substitute_separately(self, left: Series, right: Series) -> "BiSeries":
        """S(left(X), right(Y)) as a bivariate series."""
        for argument in (left, right):
            if argument.spec != self.spec:
                raise SpecMismatch(self.spec, argument.spec)
            if not argument.has_zero_constant():
                raise NonzeroConstantTerm("Substituted series must vanish at 0")
        precD = min(self.precD, left.precT, right.precT)
        left_powers = _powers(left, precD)
        right_powers = _powers(right, precD)
        zero = ZqElement.zero(self.spec)
        grid = [[zero] * (precD - i) for i in range(precD)]
        for i, j, c in self.terms():
            if i + j >= precD or c.is_zero():
                continue
            # X-part starts at degree i and Y-part at degree j
            xs, ys = left_powers[i], right_powers[j]
            for a in range(i, precD):
                x = xs.coeffs[a]
                if x.is_zero():
                    continue
                cx = c * x
                for b in range(j, precD - a):
                    y = ys.coeffs[b]
                    if not y.is_zero():
                        grid[a][b] = grid[a][b] + cx * y
        return BiSeries._make(self.spec, tuple(tuple(row) for row in grid))

    def __repr__(self) -> str:
        return f"BiSeries({self}, N={self.spec.precN})"

    def __str__(self) -> str:
        terms = []
        for degree in range(self.precD):
            for i, j, c in self.homogeneous(degree):
                if c.is_zero():
                    continue
                monomial = "*".join(
                    part for part in (
                        "" if i == 0 else ("X" if i == 1 else f"X^{i}"),
                        "" if j == 0 else ("Y" if j == 1 else f"Y^{j}"),
                    ) if part
                )
                value = c.signed_repr()
                if not monomial:
                    terms.append(value)
                elif value == "1":
                    terms.append(monomial)
                else:
                    terms.append(f"{value}*{monomial}")
        return (" + ".join(terms) if terms else "0") + f" + O(deg {self.precD})"


def _powers(series: Series, count: int) -> list[Series]:
    powers = [Series.monomial(series.spec, 0, series.precT)]
    for _ in range(count - 1):
        powers.append(powers[-1] * series)
    return powers


def bi_eval(S: BiSeries, a: Series, b: Series) -> Series:
    """S(a(T), b(T)) truncated to the smallest of the precisions."""
    if S.spec != a.spec or S.spec != b.spec:
        raise SpecMismatch(S.spec, a.spec if S.spec != a.spec else b.spec)
    if not (a.has_zero_constant() and b.has_zero_constant()):
        raise NonzeroConstantTerm("bi_eval needs a(0) = b(0) = 0")
    length = min(S.precD, a.precT, b.precT)
    a, b = a.truncate(length), b.truncate(length)
    a_powers = _powers(a, length)
    b_powers = _powers(b, length)
    result = Series.zero(S.spec, length)
    for i, j, c in S.terms():
        # a^i b^j has order >= i + j
        if i + j >= length or c.is_zero():
            continue
        result = result + (a_powers[i] * b_powers[j]) * c
    return result
