"""
Both bracketings of a law in three variables, coefficient by coefficient.

S(S(X, Y), Z) and S(X, S(Y, Z)) are expanded through the powers of S itself:
the X^i Y^j Z^k coefficient of the left side is sum_a s[a][k] * (S^a)[i][j],
the right side is sum_b s[i][b] * (S^b)[j][k].
"""
from algebra.bivariate import BiSeries
from algebra.zq import ZqElement

Monomial = tuple[int, int, int]


def _law_powers(S: BiSeries) -> list[BiSeries]:
    powers = [BiSeries(S.spec, S.precD, {(0, 0): 1})]
    for _ in range(S.precD - 1):
        powers.append(powers[-1] * S)
    return powers


def associativity_defect(S: BiSeries) -> dict[Monomial, ZqElement]:
    """
    The nonzero coefficients of S(S(X, Y), Z) - S(X, S(Y, Z)) below total
    degree precD, keyed by exponent triple.
    """
    precD = S.precD
    powers = _law_powers(S)
    coeffs = S.coeffs
    zero = ZqElement.zero(S.spec)
    defect: dict[Monomial, ZqElement] = {}
    for total in range(precD):
        for i in range(total + 1):
            for j in range(total - i + 1):
                k = total - i - j
                left = zero
                # S^a has no terms below degree a
                for a in range(min(i + j, precD - 1 - k) + 1):
                    left = left + coeffs[a][k] * powers[a].coeffs[i][j]
                right = zero
                for b in range(min(j + k, precD - 1 - i) + 1):
                    right = right + coeffs[i][b] * powers[b].coeffs[j][k]
                if left != right:
                    defect[(i, j, k)] = left - right
    return defect
