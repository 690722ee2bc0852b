#!/usr/bin/env python3
"""
Test script for the scheme registry: sizes, valencies, P- and Q-numbers
"""

import logging
from fractions import Fraction

import pytest
from dotenv import load_dotenv

from helpers.errors import ParameterError, UnsupportedSchemeError
from helpers.schemes import (
    halfd_table_multiplicities,
    make_scheme,
    multiplicity,
    p_matrix,
    p_number,
    p_number_hypergeometric,
    q_matrix,
    valency,
    z_point,
)
from models import SchemeFamily

# Set up logging
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

# Load environment variables
load_dotenv()


def sample_specs():
    return [
        make_scheme("hamming", 3, n=3),
        make_scheme("johnson", 2, n=3, m=4),
        make_scheme("qjohnson", 2, n=2, m=3),
        make_scheme("bilinear", 2, n=2, m=3),
        make_scheme("alternating", 2, m=5),
        make_scheme("hermitian", 2, n=3),
        make_scheme("polar-2a-odd", 2, n=3),
        make_scheme("polar-2a-odd", 2, n=3, second_ordering=False),
        make_scheme("polar-c", 3, n=3),
        make_scheme("polar-d", 2, n=4),
        make_scheme("half-d", 2, m=6),
    ]


def test_construction_and_sizes():
    print("=" * 60)
    print("Testing scheme construction")
    print("=" * 60)
    assert make_scheme("bilinear", 2, n=2, m=2).num_vertices == 16
    assert make_scheme("alternating", 2, m=4).num_vertices == 64
    assert make_scheme("alternating", 2, m=4).n == 2
    assert make_scheme("hermitian", 2, n=2).num_vertices == 16
    assert make_scheme("qjohnson", 2, n=2, m=2).num_vertices == 35
    assert make_scheme("johnson", 2, n=3, m=4).num_vertices == 35
    assert make_scheme("polar-2a-odd", 2, n=2).num_vertices == 27
    assert make_scheme("half-d", 2, m=4).num_vertices == 135
    assert make_scheme("bilinear", 2, n=2, m=3).label == "bilinear q=2 n=2 m=3"
    assert "standard-ordering" in make_scheme("polar-2a-odd", 2, n=2, second_ordering=False).label
    print("   Sizes and labels OK")


def test_invalid_parameters():
    with pytest.raises(ParameterError):
        make_scheme("hamming", 1, n=3)
    with pytest.raises(UnsupportedSchemeError):
        make_scheme("grassmann-plus", 2, n=3)
    with pytest.raises(ParameterError):
        make_scheme("hamming", 2, n=3, m=4)
    with pytest.raises(ParameterError):
        make_scheme("bilinear", 2, n=3, m=2)
    with pytest.raises(ParameterError):
        make_scheme("alternating", 2, n=3, m=4)
    with pytest.raises(ParameterError):
        make_scheme("half-d", 2)
    with pytest.raises(ParameterError):
        make_scheme("polar-b", 2, n=0)


def test_valencies_and_multiplicities():
    print("=" * 60)
    print("Testing valencies")
    print("=" * 60)
    bilinear = make_scheme("bilinear", 2, n=2, m=2)
    assert [valency(bilinear, i) for i in range(3)] == [1, 9, 6]
    alternating = make_scheme("alternating", 2, m=4)
    assert [valency(alternating, i) for i in range(3)] == [1, 35, 28]
    hermitian = make_scheme("hermitian", 2, n=2)
    assert [valency(hermitian, i) for i in range(3)] == [1, 5, 10]
    hamming = make_scheme("hamming", 2, n=3)
    assert [valency(hamming, i) for i in range(4)] == [1, 3, 3, 1]

    for spec in sample_specs():
        total = sum(valency(spec, i) for i in range(spec.n + 1))
        assert total == spec.num_vertices, spec.label
        assert sum(multiplicity(spec, k) for k in range(spec.n + 1)) == spec.num_vertices, spec.label
        assert multiplicity(spec, 0) == 1
        print(f"   {spec.label}: valencies and multiplicities sum to {spec.num_vertices}")


def test_p_and_q_tables():
    print("=" * 60)
    print("Testing P- and Q-number tables")
    print("=" * 60)
    for spec in sample_specs():
        n = spec.n
        P, Q = p_matrix(spec), q_matrix(spec)
        for i in range(n + 1):
            assert P[i][0] == valency(spec, i)
            assert P[0][i] == 1
        for k in range(n + 1):
            assert Q[k][0] == multiplicity(spec, k)
        # P Q = |X| I
        for i in range(n + 1):
            for j in range(n + 1):
                entry = sum(P[i][k] * Q[k][j] for k in range(n + 1))
                assert entry == (spec.num_vertices if i == j else 0), spec.label
        print(f"   {spec.label}: PQ = |X| I")


def test_hamming_krawtchouk():
    spec = make_scheme("hamming", 2, n=3)
    assert [p_number(spec, 1, k) for k in range(4)] == [3, 1, -1, -3]
    assert z_point(spec, 2) == 2


def test_affine_points_and_hypergeometric_form():
    bilinear = make_scheme("bilinear", 2, n=2, m=3)
    assert z_point(bilinear, 1) == Fraction(1, 2)
    hermitian = make_scheme("hermitian", 2, n=2)
    assert z_point(hermitian, 1) == Fraction(-1, 2)
    for spec in (bilinear, make_scheme("qjohnson", 2, n=2, m=3), make_scheme("half-d", 2, m=5)):
        for i in range(spec.n + 1):
            for k in range(spec.n + 1):
                assert p_number_hypergeometric(spec, i, k) == p_number(spec, i, k), spec.label


def test_halfd_table_reading():
    spec = make_scheme("half-d", 2, m=4)
    literal = halfd_table_multiplicities(spec)
    assert len(literal) == spec.n + 1
    assert literal[0] == 1
    with pytest.raises(UnsupportedSchemeError):
        halfd_table_multiplicities(make_scheme("polar-d", 2, n=4))


def test_family_identifiers():
    assert SchemeFamily("polar-2a-odd") == SchemeFamily.POLAR_2A_ODD
    assert {f.value for f in SchemeFamily} >= {"hamming", "half-d", "polar-2d"}


if __name__ == "__main__":
    tests = [
        test_construction_and_sizes,
        test_invalid_parameters,
        test_valencies_and_multiplicities,
        test_p_and_q_tables,
        test_hamming_krawtchouk,
        test_affine_points_and_hypergeometric_form,
        test_halfd_table_reading,
        test_family_identifiers,
    ]
    try:
        for test in tests:
            test()
        print("\nAll scheme tests passed")
        exit(0)
    except Exception as e:
        logging.error(f"Test failed with error: {str(e)}", exc_info=True)
        exit(1)
