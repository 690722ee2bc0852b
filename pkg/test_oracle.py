#!/usr/bin/env python3
"""
Test script for the brute-force oracle on small matrix schemes
"""

import logging

import numpy as np
import pytest
from dotenv import load_dotenv

from helpers.errors import CapExceededError, ParameterError, UnsupportedSchemeError
from helpers.finite_field import FiniteField, first_irreducible_quadratic, is_prime, rank_over_field
from helpers.oracle import (
    build_instance,
    code_graph,
    compare_with_formulas,
    empirical_eigenvalues,
    empirical_valencies,
    inner_distribution_of,
    max_code_bruteforce,
    random_subset_dual_check,
    witness_to_json,
)
from helpers.schemes import p_number

# Set up logging
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

# Load environment variables
load_dotenv()


def test_finite_fields():
    print("=" * 60)
    print("Testing finite field tables")
    print("=" * 60)
    assert is_prime(7) and not is_prime(9) and not is_prime(1)
    assert first_irreducible_quadratic(2) == (1, 1)
    assert first_irreducible_quadratic(3) == (0, 1)

    f4 = FiniteField(2, 2)
    assert f4.size == 4
    # x^2 = x + 1, so the Frobenius map swaps x and x + 1
    assert f4.frobenius[2] == 3 and f4.frobenius[3] == 2
    assert f4.prime_subfield == [0, 1]
    for a in range(1, 4):
        assert any(f4.mul[a, b] == 1 for b in range(1, 4))

    f3 = FiniteField(3)
    assert f3.add[2, 2] == 1 and f3.mul[2, 2] == 1 and f3.sub[0, 1] == 2
    with pytest.raises(ParameterError):
        FiniteField(4)
    with pytest.raises(ParameterError):
        FiniteField(2, 3)


def test_rank_over_field():
    f2 = FiniteField(2)
    assert rank_over_field([[1, 0], [0, 1]], f2) == 2
    assert rank_over_field([[1, 1], [1, 1]], f2) == 1
    assert rank_over_field([[0, 0], [0, 0]], f2) == 0
    assert rank_over_field([[1, 1, 0], [0, 1, 1], [1, 0, 1]], f2) == 2
    f3 = FiniteField(3)
    assert rank_over_field([[1, 1, 0], [0, 1, 1], [1, 0, 1]], f3) == 3


def test_bilinear_instance():
    print("=" * 60)
    print("Testing the bilinear forms instance")
    print("=" * 60)
    inst = build_instance("bilinear", 2, n=2, m=2)
    assert inst.num_vertices == 16
    assert inst.distance(0, 0) == 0
    assert empirical_valencies(inst).entries == [1, 9, 6]
    distances = inst.distance_matrix()
    assert (distances == distances.T).all()
    for i in range(1, 3):
        assert empirical_eigenvalues(inst, i) == [p_number(inst.spec, i, k) for k in range(3)]

    size, witness = max_code_bruteforce(inst, 2)
    assert size == 4
    assert witness[0] == 0 and len(witness) == 4
    for a in witness:
        for b in witness:
            if a != b:
                assert inst.distance(a, b) >= 2
    print(f"   Maximum 2-code: {witness}")


def test_alternating_and_hermitian_instances():
    alternating = build_instance("alternating", 2, m=4)
    assert alternating.num_vertices == 64
    assert empirical_valencies(alternating).entries == [1, 35, 28]
    size, witness = max_code_bruteforce(alternating, 2, target=8)
    assert size == 8
    assert all(alternating.distance(a, b) == 2 for a in witness for b in witness if a != b)

    hermitian = build_instance("hermitian", 2, n=2)
    assert hermitian.num_vertices == 16
    assert hermitian.field.size == 4
    assert empirical_valencies(hermitian).entries == [1, 5, 10]
    for i in range(1, 3):
        assert empirical_eigenvalues(hermitian, i) == [p_number(hermitian.spec, i, k) for k in range(3)]
    # The LP bound is 6; a 2-code holds at most two matrices per off-diagonal entry.
    size, _ = max_code_bruteforce(hermitian, 2)
    assert size == 5


def test_parallel_search_agrees():
    inst = build_instance("bilinear", 2, n=2, m=2)
    assert max_code_bruteforce(inst, 2, workers=3)[0] == max_code_bruteforce(inst, 2)[0]
    assert max_code_bruteforce(inst, 1)[0] == 16


def test_caps_and_unsupported():
    with pytest.raises(CapExceededError):
        build_instance("bilinear", 2, n=3, m=3, cap=100)
    with pytest.raises(UnsupportedSchemeError):
        build_instance("hamming", 2, n=3)
    with pytest.raises(ParameterError):
        build_instance("bilinear", 4, n=2, m=2)
    inst = build_instance("bilinear", 2, n=2, m=2)
    with pytest.raises(CapExceededError):
        empirical_eigenvalues(inst, 1, cap=8)
    with pytest.raises(ParameterError):
        max_code_bruteforce(inst, 3)


def test_subsets_and_witness():
    inst = build_instance("bilinear", 2, n=2, m=2)
    inner = inner_distribution_of(inst, range(16))
    assert inner.entries == [1, 9, 6]
    report = random_subset_dual_check(inst, trials=25, seed=3)
    assert report.passed and report.trials == 25
    assert report.min_dual_entry >= 0

    _, witness = max_code_bruteforce(inst, 2)
    document = witness_to_json(inst, witness)
    assert document["family"] == "bilinear"
    assert len(document["vertices"]) == 4
    assert document["vertices"][0] == [0, 0, 0, 0]
    assert code_graph(inst, 2).number_of_nodes() == 6


def test_comparison_report():
    print("=" * 60)
    print("Testing the empirical versus formula report")
    print("=" * 60)
    inst = build_instance("bilinear", 2, n=2, m=2)
    report = compare_with_formulas(inst, 2, trials=20, keep_witness=True)
    assert report.valencies_match and report.eigenvalues_checked
    assert report.eigenvalue_mismatches == []
    assert report.lp_bound == 4 and report.max_code == 4
    assert report.consistent
    assert report.witness is not None
    document = report.model_dump(mode="json")
    assert document["lp_bound"] == "4"
    assert np.array(document["witness"]["vertices"]).shape == (4, 4)


if __name__ == "__main__":
    tests = [
        test_finite_fields,
        test_rank_over_field,
        test_bilinear_instance,
        test_alternating_and_hermitian_instances,
        test_parallel_search_agrees,
        test_caps_and_unsupported,
        test_subsets_and_witness,
        test_comparison_report,
    ]
    try:
        for test in tests:
            test()
        print("\nAll oracle tests passed")
        exit(0)
    except Exception as e:
        logging.error(f"Test failed with error: {str(e)}", exc_info=True)
        exit(1)
