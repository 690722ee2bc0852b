#!/usr/bin/env python3
"""
Test script for the closed-form primal and dual certificates
"""

import logging
from fractions import Fraction

import pytest
from dotenv import load_dotenv

from helpers.certificates import (
    c_inverse,
    c_matrix,
    certificate_vectors,
    complementary_slackness,
    dual_distribution,
    epsilon_nd,
    hermitian_forms_even_size,
    johnson_fano_fixture,
    lp_optimum_affine,
    lp_optimum_ordinary_pochhammer,
    piret_primal_hamming,
    qc_inverse_product,
    verify_strong_duality,
)
from helpers.bounds import evaluate_bound
from helpers.delsarte_lp import lp_opt
from helpers.errors import ParameterError, UnsupportedSchemeError
from helpers.schemes import make_scheme, q_matrix
from models import DistKind, Verdict

# Set up logging
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

# Load environment variables
load_dotenv()


def test_strong_duality_spot_values():
    print("=" * 60)
    print("Testing strong duality certificates")
    print("=" * 60)
    cases = [
        (make_scheme("hermitian", 2, n=2), 2, 6, "hermitian-forms-even"),
        (make_scheme("qjohnson", 2, n=2, m=2), 2, 5, "ordinary-singleton"),
        (make_scheme("polar-2a-odd", 2, n=2), 1, 27, "ordinary-singleton"),
        (make_scheme("polar-2a-odd", 2, n=2), 2, 9, "hermitian-polar-even"),
        (make_scheme("polar-2a-odd", 2, n=3), 3, 9, "ordinary-singleton"),
        (make_scheme("bilinear", 2, n=2, m=2), 2, 4, "affine-singleton"),
        (make_scheme("half-d", 2, m=4), 2, 9, "ordinary-singleton"),
        (make_scheme("hamming", 4, n=3), 2, 16, "piret-singleton"),
        (make_scheme("johnson", 2, n=3, m=4), 2, 7, "johnson-fano-fixture"),
    ]
    for spec, d, expected, source in cases:
        pair = verify_strong_duality(spec, d)
        assert pair.verified, f"{spec.label} d={d}: {pair.primal_violations + pair.dual_violations}"
        assert pair.primal_objective == pair.dual_objective == expected
        assert pair.source == source
        assert lp_opt(spec, d) == expected
        print(f"   {spec.label}, d={d}: gap zero at {expected} ({source})")


def test_mrd_inner_distribution():
    spec = make_scheme("bilinear", 2, n=3, m=3)
    inner, dual, _ = certificate_vectors(spec, 3)
    assert inner.entries == [1, 0, 0, 7]
    assert inner.kind == DistKind.INNER
    assert verify_strong_duality(spec, 3).dual_objective == 8


def test_uncovered_cases():
    with pytest.raises(UnsupportedSchemeError):
        certificate_vectors(make_scheme("polar-2d", 2, n=3), 2)
    with pytest.raises(UnsupportedSchemeError):
        certificate_vectors(make_scheme("polar-c", 2, n=3), 3)
    with pytest.raises(UnsupportedSchemeError):
        certificate_vectors(make_scheme("johnson", 2, n=3, m=5), 2)
    with pytest.raises(ParameterError, match="Piret condition fails"):
        piret_primal_hamming(5, 2, 3)
    with pytest.raises(ParameterError):
        verify_strong_duality(make_scheme("bilinear", 2, n=2, m=2), 3)


def test_complementary_slackness():
    pair = verify_strong_duality(make_scheme("bilinear", 2, n=2, m=3), 2)
    assert complementary_slackness(pair) == []


def test_dual_distribution_of_fano_plane():
    spec, d, inner = johnson_fano_fixture()
    assert (spec.n, spec.m, d) == (3, 4, 2)
    dual = dual_distribution(spec, inner)
    assert dual.kind == DistKind.DUAL
    assert dual.entries[0] == 7
    assert all(x >= 0 for x in dual.entries)
    # a 2-design annihilates the first two dual entries
    assert dual.entries[1] == dual.entries[2] == 0


def test_closed_form_sizes():
    assert lp_optimum_affine(make_scheme("bilinear", 2, n=2, m=2), 2) == 4
    assert lp_optimum_affine(make_scheme("hermitian", 2, n=3), 3) == 8
    assert lp_optimum_ordinary_pochhammer(make_scheme("qjohnson", 2, n=2, m=2), 2) == 5
    assert hermitian_forms_even_size(make_scheme("hermitian", 2, n=2), 2) == 6
    assert hermitian_forms_even_size(make_scheme("hermitian", 2, n=3), 2) == 176


def test_epsilon():
    assert epsilon_nd(2, 2, 2) == -3
    assert epsilon_nd(3, 2, 2) == 5
    with pytest.raises(ParameterError):
        epsilon_nd(3, 3, 2)
    with pytest.raises(ParameterError):
        epsilon_nd(2, 4, 2)


def test_qc_inverse():
    print("=" * 60)
    print("Testing the C matrix and Q C^-1")
    print("=" * 60)
    for spec in (make_scheme("polar-2a-odd", 2, n=3), make_scheme("qjohnson", 3, n=2, m=3), make_scheme("half-d", 2, m=6)):
        n = spec.n
        C, C_inv = c_matrix(spec), c_inverse(spec)
        for i in range(n + 1):
            for j in range(n + 1):
                entry = sum(C[i][k] * C_inv[k][j] for k in range(n + 1))
                assert entry == (1 if i == j else 0)
        product = qc_inverse_product(spec)
        Q = q_matrix(spec)
        for k in range(n + 1):
            for j in range(n + 1):
                assert sum(Q[k][i] * C_inv[i][j] for i in range(n + 1)) == product[k][j], spec.label
        print(f"   {spec.label}: Q C^-1 matches its closed form")


def test_rational_serialization():
    pair = verify_strong_duality(make_scheme("hermitian", 2, n=2), 2)
    document = pair.model_dump(mode="json")
    assert document["primal_objective"] == "6"
    assert all(isinstance(x, str) for x in document["dual"]["entries"])
    assert Fraction(document["dual"]["entries"][0]) == 1


def test_piret_condition_sweep():
    print("=" * 60)
    print("Testing Hamming certificates under q >= max{d, n-d+2}")
    print("=" * 60)
    checked = 0
    for q in range(2, 8):
        for n in range(1, 6):
            spec = make_scheme("hamming", q, n)
            for d in range(1, n + 1):
                if q < max(d, n - d + 2):
                    with pytest.raises(ParameterError, match="Piret condition fails"):
                        certificate_vectors(spec, d)
                    continue
                pair = verify_strong_duality(spec, d)
                assert pair.verified, (q, n, d)
                assert pair.primal_objective == q ** (n - d + 1)
                assert evaluate_bound(spec, d).verdict == Verdict.MATCH
                checked += 1
    assert checked == 63
    print(f"   {checked} cases verified")


def test_hermitian_forms_five_by_five():
    for q in (2, 3):
        spec = make_scheme("hermitian", q, 5)
        for d in (2, 4):
            inner, _, source = certificate_vectors(spec, d)
            assert source == "hermitian-forms-even"
            assert all(x >= 0 for x in inner.entries)
            pair = verify_strong_duality(spec, d)
            assert pair.verified, (q, d)
            assert pair.primal_objective == hermitian_forms_even_size(spec, d) == lp_opt(spec, d)


if __name__ == "__main__":
    tests = [
        test_strong_duality_spot_values,
        test_mrd_inner_distribution,
        test_uncovered_cases,
        test_complementary_slackness,
        test_dual_distribution_of_fano_plane,
        test_closed_form_sizes,
        test_epsilon,
        test_qc_inverse,
        test_rational_serialization,
        test_piret_condition_sweep,
        test_hermitian_forms_five_by_five,
    ]
    try:
        for test in tests:
            test()
        print("\nAll certificate tests passed")
        exit(0)
    except Exception as e:
        logging.error(f"Test failed with error: {str(e)}", exc_info=True)
        exit(1)
