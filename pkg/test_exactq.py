#!/usr/bin/env python3
"""
Test script for the exact rational and q-analog helpers
"""

import logging
from fractions import Fraction

import pytest
from dotenv import load_dotenv

from helpers.errors import DegenerateBaseError, ParameterError
from helpers.exactq import (
    binomial,
    format_decimal,
    format_rational,
    parse_rational,
    pochhammer_ratio,
    power,
    q_binomial,
    q_int,
    q_pochhammer,
    to_rational,
    triangular,
)

# Set up logging
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

# Load environment variables
load_dotenv()


def test_rational_text_format():
    """Rationals print as num or num/den and parse back"""
    print("=" * 60)
    print("Testing rational text format")
    print("=" * 60)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(4) == "4"
    assert format_rational(Fraction(6, 3)) == "2"
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational("+5/2") == Fraction(5, 2)
    for bad in (" 1/2", "1 /2", "1/-2", "1.5", "", "abc"):
        with pytest.raises(ParameterError):
            parse_rational(bad)
    with pytest.raises(ParameterError):
        parse_rational("1/0")
    with pytest.raises(ParameterError):
        to_rational(0.5)
    with pytest.raises(ParameterError):
        to_rational(True)
    assert format_decimal(Fraction(1, 3)) == "0.333333"
    print("   Rational format OK")


def test_binomial_and_triangular():
    print("=" * 60)
    print("Testing binomial and triangular numbers")
    print("=" * 60)
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0
    assert binomial(3, -1) == 0
    assert triangular(4) == 6
    assert triangular(1) == 0
    assert triangular(0) == 0
    assert triangular(-2) == 3


def test_q_numbers():
    print("=" * 60)
    print("Testing q-numbers and Gaussian binomials")
    print("=" * 60)
    assert q_int(3, 2) == 7
    assert q_int(0, 5) == 0
    assert q_int(2, -2) == -1
    with pytest.raises(DegenerateBaseError, match="undefined base"):
        q_int(3, 1)

    assert q_binomial(4, 2, 2) == 35
    assert q_binomial(3, 1, -2) == 3
    assert q_binomial(4, 5, 2) == 0
    assert q_binomial(4, -1, 3) == 0
    assert q_binomial(5, 0, Fraction(1, 2)) == 1
    with pytest.raises(DegenerateBaseError, match="degenerate base"):
        q_binomial(2, 2, -1)

    for q in (2, 3, -2, Fraction(1, 4)):
        for n in range(6):
            for k in range(n + 1):
                assert q_binomial(n, k, q) == q_binomial(n, n - k, q)
                if 0 < k < n:
                    pascal = q_binomial(n - 1, k - 1, q) + Fraction(q) ** k * q_binomial(n - 1, k, q)
                    assert q_binomial(n, k, q) == pascal
    print("   Symmetry and Pascal recursion hold")


def test_pochhammer():
    print("=" * 60)
    print("Testing q-Pochhammer symbols")
    print("=" * 60)
    assert q_pochhammer(2, 3, 2) == -21
    assert q_pochhammer(5, 0, 3) == 1
    assert q_pochhammer(Fraction(1, 2), 2, 2) == 0
    with pytest.raises(ParameterError):
        q_pochhammer(2, -1, 2)

    assert pochhammer_ratio([2], [3], 1, 2) == Fraction(1, 2)
    with pytest.raises(DegenerateBaseError):
        pochhammer_ratio([2], [1], 1, 2)


BASES = (2, 3, 4, -2)
SHIFTS = (Fraction(3, 5), Fraction(-7, 2), Fraction(5, 3))


def test_power():
    assert power(-2, -2) == Fraction(1, 4)
    assert power(Fraction(3, 2), 3) == Fraction(27, 8)
    for x in (0, 1, -2, Fraction(2, 7)):
        assert power(x, 0) == 1
    assert power(-3, 3) == -27
    with pytest.raises(DegenerateBaseError):
        power(0, -1)


def test_pochhammer_identities():
    print("=" * 60)
    print("Testing q-Pochhammer index identities")
    print("=" * 60)
    for q in BASES:
        for a in SHIFTS:
            for n in range(6):
                for k in range(6):
                    # (a;q)_{n+k} = (a;q)_n (aq^n;q)_k
                    assert q_pochhammer(a, n + k, q) == q_pochhammer(a, n, q) * q_pochhammer(a * power(q, n), k, q)
                    if k > n:
                        continue
                    shifted = q_pochhammer(power(a, -1) * power(q, 1 - n), k, q)
                    scale = power(-a, -k) * power(q, triangular(k) - n * k + k)
                    assert q_pochhammer(a, n - k, q) == q_pochhammer(a, n, q) / shifted * scale

        for n in range(6):
            for k in range(7):
                # [n, k]_q = (q^-n;q)_k / (q;q)_k (-1)^k q^(kn - C(k,2))
                expected = q_pochhammer(power(q, -n), k, q) / q_pochhammer(q, k, q)
                expected *= (-1) ** k * power(q, k * n - triangular(k))
                assert q_binomial(n, k, q) == expected
        print(f"   q={q} passed")


def test_q_chu_vandermonde():
    for b in BASES + (Fraction(1, 3),):
        for x in range(6):
            for y in range(6):
                for z in range(x + y + 1):
                    total = sum(
                        power(b, i * (y - z + i)) * q_binomial(x, i, b) * q_binomial(y, z - i, b)
                        for i in range(x + 1)
                    )
                    assert q_binomial(x + y, z, b) == total, (b, x, y, z)


if __name__ == "__main__":
    tests = [
        test_rational_text_format,
        test_binomial_and_triangular,
        test_q_numbers,
        test_pochhammer,
        test_power,
        test_pochhammer_identities,
        test_q_chu_vandermonde,
    ]
    try:
        for test in tests:
            test()
        print("\nAll exactq tests passed")
        exit(0)
    except Exception as e:
        logging.error(f"Test failed with error: {str(e)}", exc_info=True)
        exit(1)
