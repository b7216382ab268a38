"""
Parser for series literals given on the command line, e.g. "(1+T)^3-1" or
"3*x*T + T^3". T is the series variable, x the generator of the coefficient
ring (the class of the root of its modulus). Coefficients are integers.
"""
import operator
import re
from functools import reduce
from logging import getLogger
from tokenize import TokenError

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from algebra.errors import LiteralSyntaxError
from algebra.series import Series
from algebra.zq import RingSpec, ZqElement

LOGGER = getLogger("cli.literal")

__all__ = (
    "parse_series_literal",
)

T, X = sympy.symbols("T x")
TRANSFORMATIONS = standard_transformations + (convert_xor,)
_FORBIDDEN = re.compile(r"[^0-9Tx+\-*^()\s]")
# A power written as ** would silently parse, so keep ^ the only spelling
_DOUBLE_STAR = re.compile(r"\*\*")


def _check_characters(text: str):
    match = _FORBIDDEN.search(text) or _DOUBLE_STAR.search(text)
    if match is not None:
        raise LiteralSyntaxError(
            text, match.start(), f"Unexpected {match.group()!r} at column {match.start()}"
        )
    depth = 0
    for position, character in enumerate(text):
        if character == "(":
            depth += 1
        elif character == ")":
            depth -= 1
            if depth < 0:
                raise LiteralSyntaxError(text, position, f"Unmatched ')' at column {position}")
    if depth:
        position = text.rindex("(")
        raise LiteralSyntaxError(text, position, f"Unclosed '(' at column {position}")
    if not text.strip():
        raise LiteralSyntaxError(text, 0, "Empty series literal")


def _exponent(node: sympy.Expr, text: str) -> int:
    value = node.doit() if not node.free_symbols else node
    if not value.is_Integer or value < 0:
        raise LiteralSyntaxError(text, None, f"Exponent {node} is not a nonnegative integer")
    return int(value)


def _fold(node: sympy.Expr, spec: RingSpec, precT: int, text: str) -> Series:
    # Every intermediate result is already truncated at T^precT
    match node:
        case sympy.Integer():
            return Series(spec, [int(node)], precT)
        case sympy.Symbol() if node == T:
            return Series.identity(spec, precT)
        case sympy.Symbol() if node == X:
            return Series(spec, [ZqElement.generator(spec)], precT)
        case sympy.Add():
            return reduce(operator.add, (_fold(arg, spec, precT, text) for arg in node.args))
        case sympy.Mul():
            return reduce(operator.mul, (_fold(arg, spec, precT, text) for arg in node.args))
        case sympy.Pow():
            base, exponent = node.args
            return _fold(base, spec, precT, text) ** _exponent(exponent, text)
    raise LiteralSyntaxError(
        text, None, f"{text!r} is not a polynomial in T and x with integer coefficients"
    )


def parse_series_literal(text: str, spec: RingSpec, precT: int) -> Series:
    """
    Parses (text) into a Series over (spec) truncated at T^precT.
    Terms of degree precT and above are dropped while expanding, so large
    powers cost only their binary length; constants are reduced into the
    ring. Raises LiteralSyntaxError with the 0-based column of the offending
    character where one can be named.
    """
    _check_characters(text)
    try:
        expression = parse_expr(
            text,
            local_dict={"T": T, "x": X},
            transformations=TRANSFORMATIONS,
            evaluate=False,
        )
    except SyntaxError as error:
        position = error.offset - 1 if error.offset else None
        raise LiteralSyntaxError(text, position, f"Cannot parse {text!r}: {error.msg}") from None
    except (TokenError, TypeError) as error:
        raise LiteralSyntaxError(text, None, f"Cannot parse {text!r}: {error}") from None

    series = _fold(expression, spec, precT, text)
    LOGGER.debug("Parsed %r into %s", text, series)
    return series
