# helpers/certificates.py
"""
Closed-form primal and dual certificates for Delsarte's LP.

Dual certificates come from Singleton-type polynomials, primal certificates
are the inner distributions of putative optimal codes. None of them is read
back from the simplex solver; `verify_strong_duality` checks each pair with
exact arithmetic.
"""

import logging
from fractions import Fraction
from functools import lru_cache

from helpers.delsarte_lp import (
    dual_bound_from_polynomial,
    dual_objective,
    dual_transform,
    is_dual_feasible,
    is_primal_feasible,
    singleton_polynomial,
)
from helpers.errors import DegenerateCertificateError, ParameterError, UnsupportedSchemeError
from helpers.exactq import binomial, pochhammer_ratio, power, q_binomial, q_pochhammer, triangular
from helpers.schemes import make_scheme, multiplicity
from models import AFFINE_FAMILIES, CertificatePair, DistKind, DistVector, SchemeFamily, SchemeSpec


def _check_d(spec: SchemeSpec, d: int):
    if not isinstance(d, int) or d < 1 or d > spec.n:
        raise ParameterError(f"d must lie in 1..{spec.n} for {spec.label}, got d={d}")


def _is_ordinary(spec: SchemeSpec) -> bool:
    if spec.family == SchemeFamily.POLAR_2A_ODD:
        if not spec.second_ordering:
            raise UnsupportedSchemeError(f"{spec.label}: certificates are stated in the second ordering")
        return True
    return spec.family in (SchemeFamily.QJOHNSON, SchemeFamily.HALF_D)


def _normalized(values, kind=DistKind.DUAL_SOLUTION) -> DistVector:
    if values[0] == 0:
        raise DegenerateCertificateError("degenerate certificate: F_0 = 0")
    return DistVector(entries=[v / values[0] for v in values], kind=kind)


def _qbin(spec, top, bottom):
    return q_binomial(top, bottom, spec.b)


def _poch(spec, a, k):
    return q_pochhammer(a, k, spec.b)


def _alternating_sum(spec: SchemeSpec, i: int, last: int, weight) -> Fraction:
    """sum_{j=i}^{last} (-1)^(j-i) b^C(j-i,2) [j,i]_b weight(j); the q-binomial inversion kernel."""
    b = spec.b
    total = Fraction(0)
    for j in range(i, last + 1):
        term = power(b, triangular(j - i)) * _qbin(spec, j, i) * weight(j)
        total += term if (j - i) % 2 == 0 else -term
    return total


# Dual certificates


def dual_singleton_affine(spec: SchemeSpec, d: int) -> DistVector:
    if spec.family not in AFFINE_FAMILIES:
        raise UnsupportedSchemeError(f"{spec.label} is not a matrix scheme")
    _check_d(spec, d)
    if spec.family == SchemeFamily.HERMITIAN and d % 2 == 0:
        raise UnsupportedSchemeError(f"even d={d} on {spec.label}: use dual_hermitian_forms_even")
    return _normalized([_qbin(spec, spec.n - k, d - 1) for k in range(spec.n + 1)])


def dual_singleton_ordinary(spec: SchemeSpec, d: int) -> DistVector:
    if not _is_ordinary(spec):
        raise UnsupportedSchemeError(f"{spec.label} is not an ordinary q-analog")
    _check_d(spec, d)
    if spec.family == SchemeFamily.POLAR_2A_ODD and d % 2 == 0:
        raise UnsupportedSchemeError(f"even d={d} on {spec.label}: use dual_hermitian_polar_even")
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    size = Fraction(spec.num_vertices)
    values = [
        power(b, k * (d - 1))
        * _qbin(spec, n - k, d - 1)
        * _poch(spec, q * c * power(b, n - k), d - 1)
        / _poch(spec, q, d - 1)
        / size
        for k in range(n + 1)
    ]
    return _normalized(values)


def dual_hermitian_forms_even(spec: SchemeSpec, d: int) -> DistVector:
    if spec.family != SchemeFamily.HERMITIAN:
        raise UnsupportedSchemeError(f"{spec.label} is not a Hermitian forms scheme")
    _check_d(spec, d)
    if d % 2:
        raise ParameterError(f"dual_hermitian_forms_even needs even d, got d={d}")
    n = spec.n
    sign = 1 if (n + 1) % 2 == 0 else -1
    values = [
        sign
        * (
            _qbin(spec, n - 1, d - 2) * _qbin(spec, n - k, d - 1)
            - _qbin(spec, n - 1, d - 1) * _qbin(spec, n - k, d - 2)
        )
        for k in range(n + 1)
    ]
    return _normalized(values)


def dual_hermitian_polar_even(spec: SchemeSpec, d: int) -> DistVector:
    if spec.family != SchemeFamily.POLAR_2A_ODD or not spec.second_ordering:
        raise UnsupportedSchemeError(f"{spec.label} is not the Hermitian dual polar space in the second ordering")
    _check_d(spec, d)
    if d % 2:
        raise ParameterError(f"dual_hermitian_polar_even needs even d, got d={d}")
    b, q, n = spec.b, spec.q, spec.n
    weight = b * (power(b, n + d - 2) - 1) / (q * power(b, d - 2) - 1)
    size = Fraction(spec.num_vertices)
    values = []
    for k in range(n + 1):
        first = (
            power(b, k * (d - 1))
            * _poch(spec, power(b, n - k + 1), d - 1)
            / _poch(spec, q, d - 1)
            * _qbin(spec, n - 1, d - 2)
            * _qbin(spec, n - k, d - 1)
        )
        second = (
            power(b, k * (d - 2))
            * weight
            * _poch(spec, power(b, n - k + 1), d - 2)
            / _poch(spec, q, d - 2)
            * _qbin(spec, n - 1, d - 1)
            * _qbin(spec, n - k, d - 2)
        )
        values.append((first - second) / size)
    return _normalized(values)


def dual_singleton_hamming(n: int, q: int, d: int) -> DistVector:
    spec = make_scheme(SchemeFamily.HAMMING, q, n)
    _check_d(spec, d)
    return _normalized([Fraction(binomial(n - k, d - 1)) for k in range(n + 1)])


def dual_singleton_johnson(n: int, m: int, d: int) -> DistVector:
    """Singleton polynomial prod_{i=d}^{n} (z - i) pushed through the Eberlein tables."""
    spec = make_scheme(SchemeFamily.JOHNSON, 2, n, m)
    _check_d(spec, d)
    return dual_bound_from_polynomial(spec, singleton_polynomial(spec, d), range(d, n + 1)).coefficients


# Closed-form sizes


def lp_optimum_affine(spec: SchemeSpec, d: int) -> Fraction:
    return power(spec.c * power(spec.b, spec.n), spec.n - d + 1)


def lp_optimum_ordinary_pochhammer(spec: SchemeSpec, d: int) -> Fraction:
    """|X| (q;b)_{d-1} / (qcb^n;b)_{d-1}."""
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    return Fraction(spec.num_vertices) * pochhammer_ratio([q], [q * c * power(b, n)], d - 1, b)


def hermitian_forms_even_size(spec: SchemeSpec, d: int) -> Fraction:
    b, n = spec.b, spec.n
    numerator = (power(b, n - d + 2) - 1) + power(b, n) * (power(b, n - d + 1) - 1)
    return lp_optimum_affine(spec, d) * numerator / (power(b, n - d + 2) - power(b, n - d + 1))


def epsilon_nd(n: int, d: int, q: int) -> Fraction:
    if d % 2:
        raise ParameterError(f"epsilon(n, d) is defined for even d, got d={d}")
    if d < 2 or d > n:
        raise ParameterError(f"epsilon(n, d) needs 2 <= d <= n, got n={n}, d={d}")
    b = Fraction(-q)
    outer = power(b, n - d + 2) - 1
    inner = q * (power(b, n + d - 2) - 1) * (power(b, n - d + 1) - 1)
    numerator = outer + inner / (q * power(b, d - 2) - 1)
    denominator = outer + inner / (power(b, n + d - 1) - 1)
    return numerator / denominator


def hermitian_polar_even_size(spec: SchemeSpec, d: int) -> Fraction:
    return lp_optimum_ordinary_pochhammer(spec, d) * epsilon_nd(spec.n, d, spec.q)


# The matrices C and QC^-1


@lru_cache(maxsize=None)
def c_matrix(spec: SchemeSpec) -> tuple:
    """C_{j,i} = [n-i, j]_b."""
    n = spec.n
    return tuple(tuple(_qbin(spec, n - i, j) for i in range(n + 1)) for j in range(n + 1))


@lru_cache(maxsize=None)
def c_inverse(spec: SchemeSpec) -> tuple:
    """(C^-1)_{i,j} = (-1)^(i+j-n) b^C(i+j-n,2) [j, n-i]_b."""
    n, b = spec.n, spec.b
    rows = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            shift = i + j - n
            value = power(b, triangular(shift)) * _qbin(spec, j, n - i)
            row.append(value if shift % 2 == 0 else -value)
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def qc_inverse_product(spec: SchemeSpec) -> tuple:
    if not _is_ordinary(spec):
        raise UnsupportedSchemeError(f"QC^-1 closed form is stated for ordinary q-analogs, got {spec.label}")
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    a = Fraction(1, q) / c * power(b, -2 * n)
    rows = []
    for k in range(n + 1):
        head = (
            multiplicity(spec, k)
            * power(a, k)
            * power(b, k * k)
            * _poch(spec, q * power(b, n - k), k)
            / _poch(spec, power(c, -1) * power(b, -n), k)
        )
        row = []
        for j in range(n + 1):
            value = head * power(b, triangular(j)) * power(-b * c, j)
            value *= _poch(spec, power(b, -k), j) * _poch(spec, a * power(b, k), j)
            value /= _poch(spec, power(b, -n), j) * _poch(spec, Fraction(1, q) * power(b, 1 - n), j)
            row.append(value)
        rows.append(tuple(row))
    return tuple(rows)


def _dual_from_c_moments(spec: SchemeSpec, moments) -> list[Fraction]:
    """A' = (QC^-1)(CA) given the moments (CA)_j = sum_i [n-i, j] A_i."""
    product = qc_inverse_product(spec)
    return [sum((product[k][j] * moments[j] for j in range(spec.n + 1)), Fraction(0)) for k in range(spec.n + 1)]


# Distributions


def dual_distribution(spec: SchemeSpec, inner) -> DistVector:
    entries = inner.entries if isinstance(inner, DistVector) else inner
    return DistVector(entries=dual_transform(spec, entries), kind=DistKind.DUAL)


def _inner_vector(spec, tail) -> DistVector:
    """Build (A_0..A_n) from a function giving A_{n-i} for i < n."""
    entries = [Fraction(1)] + [tail(spec.n - index) for index in range(1, spec.n + 1)]
    return DistVector(entries=entries, kind=DistKind.INNER)


def inner_distribution_affine(spec: SchemeSpec, d: int):
    if spec.family not in AFFINE_FAMILIES:
        raise UnsupportedSchemeError(f"{spec.label} is not a matrix scheme")
    _check_d(spec, d)
    if spec.family == SchemeFamily.HERMITIAN and d % 2 == 0:
        raise UnsupportedSchemeError(f"even d={d} on {spec.label}: use hermitian_forms_even_distributions")
    n = spec.n
    base = spec.c * power(spec.b, n)
    size = power(base, n - d + 1)

    inner = _inner_vector(
        spec,
        lambda i: _alternating_sum(spec, i, n - d, lambda j: _qbin(spec, n, j) * (power(base, n - d + 1 - j) - 1)),
    )
    dual_entries = [size] + [
        size * _alternating_sum(spec, n - index, d - 2, lambda j: _qbin(spec, n, j) * (power(base, d - 1 - j) - 1))
        for index in range(1, n + 1)
    ]
    return inner, DistVector(entries=dual_entries, kind=DistKind.DUAL)


def inner_distribution_ordinary(spec: SchemeSpec, d: int):
    if not _is_ordinary(spec):
        raise UnsupportedSchemeError(f"{spec.label} is not an ordinary q-analog")
    _check_d(spec, d)
    if spec.family == SchemeFamily.POLAR_2A_ODD and d % 2 == 0:
        raise UnsupportedSchemeError(f"even d={d} on {spec.label}: use hermitian_polar_even_distributions")
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    top = q * c * power(b, n)
    size = lp_optimum_ordinary_pochhammer(spec, d)

    def inner_weight(j):
        ratio = _poch(spec, top, n - j) * _poch(spec, q, d - 1) / (_poch(spec, top, d - 1) * _poch(spec, q, n - j))
        return _qbin(spec, n, j) * (ratio - 1)

    inner = _inner_vector(spec, lambda i: _alternating_sum(spec, i, n - d, inner_weight))

    dual_entries = [size]
    for index in range(1, n + 1):
        k = n - index
        total = Fraction(0)
        for j in range(d - 1 - k):
            length = d - k - j - 1
            term = (
                power(b, triangular(n - k - j))
                * _poch(spec, q * power(b, k), j)
                / _poch(spec, q * c * power(b, 2 * k + 1), j)
                * _qbin(spec, n - k, j)
                * (
                    1
                    - _poch(spec, q * power(b, k + j), length)
                    / _poch(spec, q * c * power(b, n + k + j), length)
                )
            )
            total += term if j % 2 == 0 else -term
        dual_entries.append(_ordinary_dual_constant(spec, k) * total if total else Fraction(0))
    return inner, DistVector(entries=dual_entries, kind=DistKind.DUAL)


def _ordinary_dual_constant(spec: SchemeSpec, k: int) -> Fraction:
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    length = n - k
    value = multiplicity(spec, n - k) * power(-Fraction(1, q) * power(b, 1 - n), length)
    value *= _poch(spec, q * power(b, k), length)
    value *= _poch(spec, Fraction(1, q) / c * power(b, -n - k), length)
    value /= _poch(spec, power(c, -1) * power(b, -n), length)
    value /= _poch(spec, Fraction(1, q) * power(b, 1 - n), length)
    return value


def hermitian_forms_even_distributions(spec: SchemeSpec, d: int):
    if spec.family != SchemeFamily.HERMITIAN:
        raise UnsupportedSchemeError(f"{spec.label} is not a Hermitian forms scheme")
    _check_d(spec, d)
    if d % 2:
        raise ParameterError(f"hermitian_forms_even_distributions needs even d, got d={d}")
    b, q, n = spec.b, spec.q, spec.n
    size = hermitian_forms_even_size(spec, d)
    signed_top = (1 if (n + 1) % 2 == 0 else -1) * power(q, n * (n - d + 1))
    shift = power(b, n - d + 1) - 1
    first_dual = (power(b, n) - 1) / shift * (signed_top - size)

    def inner_weight(j):
        scaled = (1 if j % 2 == 0 else -1) * size / power(b, n * j)
        tail = (1 if (n + j) % 2 == 0 else -1) * power(b, n * (n - d + 1 - j))
        return _qbin(spec, n, j) * (scaled - 1 - (power(b, j) - 1) / shift * (scaled + tail))

    inner = _inner_vector(spec, lambda i: _alternating_sum(spec, i, n - d, inner_weight))

    def dual_weight(j):
        full = (1 if (n - j) % 2 == 0 else -1) * power(b, n * (n - j))
        return _qbin(spec, n, j) * (full - size - (power(b, n - j) - 1) / shift * (signed_top - size))

    dual_entries = [size] + [Fraction(0)] * n
    dual_entries[1] = first_dual
    for k in range(d - 2):
        dual_entries[n - k] = _alternating_sum(spec, k, d - 3, dual_weight)
    return inner, DistVector(entries=dual_entries, kind=DistKind.DUAL)


def hermitian_polar_first_dual(spec: SchemeSpec, d: int) -> Fraction:
    """A'_1 of the putative optimal even-d code in the Hermitian dual polar space."""
    b, q, n = spec.b, spec.q, spec.n
    return (
        Fraction(spec.num_vertices)
        * power(b, 1 - d)
        * _poch(spec, q, d - 1)
        / _poch(spec, power(b, n), d - 1)
        * (power(b, n) - 1)
        / (power(b, n - d + 1) - 1)
        * (1 - epsilon_nd(n, d, q))
    )


def hermitian_polar_even_distributions(spec: SchemeSpec, d: int):
    if spec.family != SchemeFamily.POLAR_2A_ODD or not spec.second_ordering:
        raise UnsupportedSchemeError(f"{spec.label} is not the Hermitian dual polar space in the second ordering")
    _check_d(spec, d)
    if d % 2:
        raise ParameterError(f"hermitian_polar_even_distributions needs even d, got d={d}")
    b, q, n = spec.b, spec.q, spec.n
    total = Fraction(spec.num_vertices)
    size = hermitian_polar_even_size(spec, d)
    first_dual = hermitian_polar_first_dual(spec, d)

    def moment(j):
        """sum_i [n-i, j] A_i, fixed by |Y| and A'_1 whenever j <= n-d+2."""
        from_size = _qbin(spec, n, j) * _poch(spec, power(b, n + 1), n - j) / _poch(spec, q, n - j) * size
        from_first = (
            power(b, n - j) * _qbin(spec, n - 1, j - 1) * _poch(spec, power(b, n), n - j) / _poch(spec, q, n - j)
        ) * first_dual
        return (from_size + from_first) / total

    inner = _inner_vector(spec, lambda i: _alternating_sum(spec, i, n - d, lambda j: moment(j) - _qbin(spec, n, j)))
    moments = [moment(j) if j <= n - d else _qbin(spec, n, j) for j in range(n + 1)]
    dual_entries = _dual_from_c_moments(spec, moments)
    return inner, DistVector(entries=dual_entries, kind=DistKind.DUAL)


def piret_primal_hamming(n: int, q: int, d: int) -> DistVector:
    if q < max(d, n - d + 2):
        raise ParameterError(f"Piret condition fails: q < max{{d, n-d+2}} (q={q}, n={n}, d={d})")
    spec = make_scheme(SchemeFamily.HAMMING, q, n)
    _check_d(spec, d)
    entries = [Fraction(1)] + [Fraction(0)] * n
    for i in range(d, n + 1):
        inner = sum((-1) ** j * binomial(i, j) * (q ** (i - d + 1 - j) - 1) for j in range(i - d + 1))
        entries[i] = Fraction(binomial(n, i) * inner)
    return DistVector(entries=entries, kind=DistKind.INNER)


def johnson_fano_fixture():
    """The Fano plane as a 2-code in J(3,4): a hand-checkable regression fixture."""
    spec = make_scheme(SchemeFamily.JOHNSON, 2, 3, 4)
    inner = DistVector(entries=[Fraction(1), Fraction(0), Fraction(6), Fraction(0)], kind=DistKind.INNER)
    return spec, 2, inner


# Strong duality


def certificate_vectors(spec: SchemeSpec, d: int):
    """(inner distribution, dual LP vector, source tag) for a covered (spec, d)."""
    _check_d(spec, d)
    family = spec.family
    if family == SchemeFamily.HERMITIAN and d % 2 == 0:
        inner, _ = hermitian_forms_even_distributions(spec, d)
        return inner, dual_hermitian_forms_even(spec, d), "hermitian-forms-even"
    if family in AFFINE_FAMILIES:
        inner, _ = inner_distribution_affine(spec, d)
        return inner, dual_singleton_affine(spec, d), "affine-singleton"
    if family == SchemeFamily.POLAR_2A_ODD and spec.second_ordering and d % 2 == 0:
        inner, _ = hermitian_polar_even_distributions(spec, d)
        return inner, dual_hermitian_polar_even(spec, d), "hermitian-polar-even"
    if family in (SchemeFamily.QJOHNSON, SchemeFamily.HALF_D, SchemeFamily.POLAR_2A_ODD):
        inner, _ = inner_distribution_ordinary(spec, d)
        return inner, dual_singleton_ordinary(spec, d), "ordinary-singleton"
    if family == SchemeFamily.HAMMING:
        return piret_primal_hamming(spec.n, spec.q, d), dual_singleton_hamming(spec.n, spec.q, d), "piret-singleton"
    if family == SchemeFamily.JOHNSON:
        fixture_spec, fixture_d, inner = johnson_fano_fixture()
        if (spec.n, spec.m, d) != (fixture_spec.n, fixture_spec.m, fixture_d):
            raise UnsupportedSchemeError(f"no constructive primal certificate for {spec.label} with d={d}")
        return inner, dual_singleton_johnson(spec.n, spec.m, d), "johnson-fano-fixture"
    raise UnsupportedSchemeError(f"no certificates for {spec.label}; use the bounds module")


def verify_strong_duality(spec: SchemeSpec, d: int) -> CertificatePair:
    inner, dual, source = certificate_vectors(spec, d)
    D = range(d, spec.n + 1)
    primal_violations = is_primal_feasible(spec, D, inner)
    dual_violations = is_dual_feasible(spec, D, dual)
    primal_value = inner.total()
    dual_value = dual_objective(spec, dual)
    pair = CertificatePair(
        scheme=spec,
        d=d,
        primal=inner,
        dual=dual,
        primal_objective=primal_value,
        dual_objective=dual_value,
        duality_gap_zero=primal_value == dual_value,
        primal_violations=primal_violations,
        dual_violations=dual_violations,
        source=source,
    )
    if pair.verified:
        logging.info(f"Strong duality verified for {spec.label}, d={d} at {primal_value}")
    else:
        logging.warning(
            f"Certificate check failed for {spec.label}, d={d}: primal {primal_value}, dual {dual_value}, "
            f"violations {primal_violations + dual_violations}"
        )
    return pair


def complementary_slackness(pair: CertificatePair) -> list[int]:
    """Indices k >= 1 with y_k * A'_k != 0."""
    dual_of_inner = dual_transform(pair.scheme, pair.primal.entries)
    return [k for k in range(1, pair.scheme.n + 1) if pair.dual.entries[k] * dual_of_inner[k] != 0]

