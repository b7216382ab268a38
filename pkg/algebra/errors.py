"""
Exception hierarchy shared by every package of the toolkit.

Errors that describe bad input derive from `InputError`, errors that describe
a mathematical obstruction (the requested object does not exist at the
working precision) derive from `ObstructionError`.
The CLI maps these families onto its exit codes.
"""


class PadicError(Exception):
    """Base class of all toolkit errors."""


class InputError(PadicError, ValueError):
    """The arguments violate a documented precondition."""


class InvalidRingSpec(InputError):
    pass


class SpecMismatch(InputError):
    """Raised when two operands live in different coefficient rings."""
    def __init__(self, left, right, *args):
        self.left = left
        self.right = right
        super().__init__(*(args or (f"Ring mismatch: {left} vs {right}",)))


class NonUnit(InputError):
    pass


class NotDivisible(InputError):
    """Raised by explicit p-power division when the dividend is too small."""
    def __init__(self, valuation: int, required: int, *args):
        self.valuation = valuation
        self.required = required
        super().__init__(*(args or (
            f"Element of valuation {valuation} is not divisible by p^{required}",
        )))


class NonzeroConstantTerm(InputError):
    pass


class NonUnitDerivative(InputError):
    pass


class ZeroSeries(InputError):
    pass


class NotStable(InputError):
    pass


class NotBaseFixed(InputError):
    pass


class InvalidFrobeniusSeries(InputError):
    pass


class NotAGroup(InputError):
    pass


class OrderNotPrimeToP(InputError):
    pass


class TruncationTooSmall(InputError):
    pass


class LiteralSyntaxError(InputError):
    """
    Raised by the series literal parser.
    `position` is the 0-based column of the offending character, if known.
    """
    def __init__(self, text: str, position: int|None, *args):
        self.text = text
        self.position = position
        super().__init__(*args)


class ObstructionError(PadicError, ArithmeticError):
    """
    A degree-by-degree construction hit a coefficient it cannot solve for.
    `degree` is the T-degree (or total degree) where it happened.
    """
    def __init__(self, degree: int|None, *args):
        self.degree = degree
        super().__init__(*args)


class DivisibilityFailure(ObstructionError):
    pass


class NoCommutant(ObstructionError):
    pass


class NoSolution(ObstructionError):
    pass


class NotInSubring(ObstructionError):
    pass


class NoInteriorFixedPoint(ObstructionError):
    pass


class PrecisionExhausted(PadicError, ArithmeticError):
    """The working precision cannot support the requested result."""
