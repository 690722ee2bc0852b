# helpers/exactq.py
"""
Exact rational arithmetic and the q-analog kernel.

Every scalar in the package is a `fractions.Fraction`. Bases may be negative
(b = -q for the Hermitian schemes) or non-integral (c = 1/q).
"""

import re
from fractions import Fraction
from math import comb
from numbers import Rational

from helpers.errors import DegenerateBaseError, ParameterError

_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParameterError(f"Refusing to read boolean {value!r} as a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ParameterError(f"Cannot convert {value!r} of type {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL_PATTERN.match(text):
        raise ParameterError(f"Malformed rational {text!r}; expected 'num' or 'num/den' without whitespace")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParameterError(f"Rational {text!r} has a zero denominator")


def format_rational(value) -> str:
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value, digits: int = 6) -> str:
    """Approximate display form. Never feed the result back into a computation."""
    return f"{float(to_rational(value)):.{digits}g}"


def power(x, e: int) -> Fraction:
    x = to_rational(x)
    if e < 0 and x == 0:
        raise DegenerateBaseError(f"0 raised to the negative power {e}")
    return x ** e


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def triangular(i: int) -> int:
    """C(i, 2) = i(i-1)/2, valid for negative i as well."""
    return i * (i - 1) // 2


def q_int(n: int, q) -> Fraction:
    q = to_rational(q)
    if q == 1:
        raise DegenerateBaseError("undefined base: q-number [n]_q needs q != 1")
    if n < 0:
        raise ParameterError(f"q-number needs n >= 0, got {n}")
    return (q ** n - 1) / (q - 1)


def q_pochhammer(a, k: int, q) -> Fraction:
    """(a; q)_k = prod_{i<k} (1 - a q^i); the empty product is 1."""
    if k < 0:
        raise ParameterError(f"q-Pochhammer length must be nonnegative, got {k}")
    a = to_rational(a)
    q = to_rational(q)
    result = Fraction(1)
    factor = a
    for _ in range(k):
        result *= 1 - factor
        factor *= q
    return result


def q_binomial(n: int, k: int, q) -> Fraction:
    """Gaussian binomial by its defining product; 0 outside 0 <= k <= n."""
    q = to_rational(q)
    if k < 0 or n < 0 or k > n:
        return Fraction(0)
    result = Fraction(1)
    for j in range(1, k + 1):
        denominator = q ** j - 1
        if denominator == 0:
            raise DegenerateBaseError(f"degenerate base: q={q} makes q^{j} - 1 vanish in [{n}, {k}]_q")
        result *= (q ** (n - j + 1) - 1) / denominator
    return result


def pochhammer_ratio(numerators, denominators, k: int, q) -> Fraction:
    """prod (a;q)_k over numerators divided by prod (b;q)_k over denominators."""
    value = Fraction(1)
    for a in numerators:
        value *= q_pochhammer(a, k, q)
    for b in denominators:
        term = q_pochhammer(b, k, q)
        if term == 0:
            raise DegenerateBaseError(f"degenerate base: ({b};{q})_{k} vanishes in a denominator")
        value /= term
    return value


def kronecker(i: int, j: int) -> int:
    return 1 if i == j else 0

