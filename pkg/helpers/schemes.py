# helpers/schemes.py
"""
Registry of classical association schemes.

`make_scheme` resolves a family and its size parameters into an immutable
`SchemeSpec`; every other function here reads parameters off that spec.
P- and Q-number tables are memoized per spec on first use.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import prod

from helpers.errors import ParameterError, UnsupportedSchemeError
from helpers.exactq import binomial, power, q_binomial, q_pochhammer, triangular
from models import AFFINE_FAMILIES, POLAR_FAMILIES, SchemeFamily, SchemeSpec

# Doubled polar parameter 2e and whether p = q^2, per family.
_POLAR_PARAMETERS = {
    SchemeFamily.POLAR_2A_ODD: (-1, True),
    SchemeFamily.POLAR_2A_EVEN: (1, True),
    SchemeFamily.POLAR_B: (0, False),
    SchemeFamily.POLAR_C: (0, False),
    SchemeFamily.POLAR_D: (-2, False),
    SchemeFamily.POLAR_2D: (2, False),
}

FAMILIES_WITH_M = frozenset({
    SchemeFamily.JOHNSON,
    SchemeFamily.QJOHNSON,
    SchemeFamily.BILINEAR,
    SchemeFamily.ALTERNATING,
    SchemeFamily.HALF_D,
})
# n is m // 2 for these
M_ONLY_FAMILIES = frozenset({SchemeFamily.ALTERNATING, SchemeFamily.HALF_D})


def make_scheme(family, q: int, n: int = None, m: int = None, second_ordering: bool = True) -> SchemeSpec:
    try:
        family = SchemeFamily(family)
    except ValueError:
        raise UnsupportedSchemeError(f"Unknown scheme family {family!r}")

    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"q must be an integer >= 2, got {q!r}")

    if family in M_ONLY_FAMILIES:
        if m is None:
            raise ParameterError(f"{family.value} needs m (matrix size or rank)")
        if m < 2:
            raise ParameterError(f"{family.value} needs m >= 2, got m={m}")
        if n is not None and n != m // 2:
            raise ParameterError(f"{family.value} with m={m} has n = {m // 2} classes, got n={n}")
        n = m // 2
    elif family in FAMILIES_WITH_M:
        if m is None:
            raise ParameterError(f"{family.value} needs m")
        if n is None or n < 1:
            raise ParameterError(f"{family.value} needs n >= 1, got n={n}")
        if m < n:
            raise ParameterError(f"{family.value} needs m >= n, got n={n}, m={m}")
    else:
        if n is None or n < 1:
            raise ParameterError(f"{family.value} needs n >= 1, got n={n}")
        if m is not None:
            raise ParameterError(f"{family.value} takes no m parameter, got m={m}")

    fields = {
        "family": family,
        "q": q,
        "n": n,
        "m": m,
        "second_ordering": second_ordering and family == SchemeFamily.POLAR_2A_ODD,
    }

    if family == SchemeFamily.HAMMING:
        fields["num_vertices"] = q ** n
    elif family == SchemeFamily.JOHNSON:
        fields["num_vertices"] = binomial(m + n, n)
    elif family in (SchemeFamily.BILINEAR, SchemeFamily.QJOHNSON):
        fields["b"] = Fraction(q)
        fields["c"] = Fraction(q) ** (m - n)
        if family == SchemeFamily.BILINEAR:
            fields["num_vertices"] = q ** (m * n)
        else:
            fields["num_vertices"] = int(q_binomial(m + n, n, q))
    elif family in (SchemeFamily.ALTERNATING, SchemeFamily.HALF_D):
        fields["b"] = Fraction(q * q)
        fields["c"] = Fraction(1, q) if m % 2 == 0 else Fraction(q)
        if family == SchemeFamily.ALTERNATING:
            fields["num_vertices"] = q ** triangular(m)
        else:
            fields["num_vertices"] = prod(1 + q ** i for i in range(1, m))
    elif family == SchemeFamily.HERMITIAN:
        fields["b"] = Fraction(-q)
        fields["c"] = Fraction(-1)
        fields["num_vertices"] = q ** (n * n)
    elif family in POLAR_FAMILIES:
        two_e, over_square = _POLAR_PARAMETERS[family]
        p = q * q if over_square else q
        fields["polar_p"] = p
        fields["polar_sqrt_p"] = q if over_square else None
        fields["polar_two_e"] = two_e
        fields["num_vertices"] = _polar_size(p, fields["polar_sqrt_p"], two_e, n)
        if family == SchemeFamily.POLAR_2A_ODD:
            fields["b"] = Fraction(-q)
            fields["c"] = Fraction(-1)
        else:
            fields["b"] = Fraction(p)
    else:
        raise UnsupportedSchemeError(f"No construction for family {family.value}")

    spec = SchemeSpec(**fields)
    logging.debug(f"Built scheme {spec.label} with |X| = {spec.num_vertices}")
    return spec


def _half_power(p: int, sqrt_p, doubled_exponent: int) -> Fraction:
    """p^(x/2) for a doubled exponent x; odd x needs p to be a perfect square."""
    if sqrt_p is not None:
        return power(sqrt_p, doubled_exponent)
    if doubled_exponent % 2:
        raise ParameterError(f"p={p} is not a square, cannot raise it to the half-integer power {doubled_exponent}/2")
    return power(p, doubled_exponent // 2)


def _polar_size(p: int, sqrt_p, two_e: int, n: int) -> int:
    size = Fraction(1)
    for i in range(1, n + 1):
        size *= 1 + _half_power(p, sqrt_p, 2 * i + two_e)
    if size.denominator != 1:
        raise ParameterError(f"polar space size {size} is not an integer")
    return size.numerator


def polar_half_power(spec: SchemeSpec, doubled_exponent: int) -> Fraction:
    if spec.polar_p is None:
        raise UnsupportedSchemeError(f"{spec.family.value} has no polar parameters")
    return _half_power(spec.polar_p, spec.polar_sqrt_p, doubled_exponent)


def scheme_label(spec: SchemeSpec) -> str:
    return spec.label


def second_ordering_permutation(n: int) -> list[int]:
    """pi with pi(0)=0, pi(2j)=j and pi(2j+1)=n-j: the order E_0, E_n, E_1, E_{n-1}, ..."""
    if n < 1:
        raise ParameterError(f"second ordering needs n >= 1, got {n}")
    order = [0]
    for position in range(1, n + 1):
        if position % 2 == 0:
            order.append(position // 2)
        else:
            order.append(n - (position - 1) // 2)
    return order


def _check_index(spec: SchemeSpec, index: int, name: str):
    if not isinstance(index, int) or index < 0 or index > spec.n:
        raise ParameterError(f"{name}={index} is out of range 0..{spec.n} for {spec.label}")


def _is_ordinary_hypergeometric(spec: SchemeSpec) -> bool:
    return spec.family in (SchemeFamily.QJOHNSON, SchemeFamily.HALF_D) or (
        spec.family == SchemeFamily.POLAR_2A_ODD and spec.second_ordering
    )


def z_point(spec: SchemeSpec, i: int) -> Fraction:
    """Abscissa z_i at which Q_k(i) is a polynomial of degree k in z_i."""
    _check_index(spec, i, "i")
    if spec.family in (SchemeFamily.HAMMING, SchemeFamily.JOHNSON):
        return Fraction(i)
    return power(spec.b, -i)


# Valencies


def valency(spec: SchemeSpec, i: int) -> Fraction:
    _check_index(spec, i, "i")
    return _valencies(spec)[i]


@lru_cache(maxsize=None)
def _valencies(spec: SchemeSpec) -> tuple:
    return tuple(_raw_valency(spec, i) for i in range(spec.n + 1))


def _raw_valency(spec: SchemeSpec, i: int) -> Fraction:
    family, q, n, m = spec.family, spec.q, spec.n, spec.m
    if family == SchemeFamily.HAMMING:
        return Fraction(binomial(n, i) * (q - 1) ** i)
    if family == SchemeFamily.JOHNSON:
        return Fraction(binomial(n, i) * binomial(m, i))
    if family in AFFINE_FAMILIES:
        return _affine_weight(spec, i)
    if family == SchemeFamily.QJOHNSON:
        return power(q, i * i) * q_binomial(n, i, q) * q_binomial(m, i, q)
    if family == SchemeFamily.HALF_D:
        return power(q, triangular(2 * i)) * q_binomial(m, 2 * i, q)
    if family in POLAR_FAMILIES:
        doubled = i * (i + 1) + i * spec.polar_two_e
        return polar_half_power(spec, doubled) * q_binomial(n, i, spec.polar_p)
    raise UnsupportedSchemeError(f"No valencies for {family.value}")


def _affine_weight(spec: SchemeSpec, i: int) -> Fraction:
    """b^C(i,2) [n,i]_b prod_{j<i} (c b^(n-j) - 1): both v_i and mu_i of a matrix scheme."""
    b, c, n = spec.b, spec.c, spec.n
    value = power(b, triangular(i)) * q_binomial(n, i, b)
    for j in range(i):
        value *= c * power(b, n - j) - 1
    return value


# Multiplicities


def multiplicity(spec: SchemeSpec, k: int) -> Fraction:
    _check_index(spec, k, "k")
    return _multiplicities(spec)[k]


@lru_cache(maxsize=None)
def _multiplicities(spec: SchemeSpec) -> tuple:
    family = spec.family
    if family == SchemeFamily.HALF_D:
        return _multiplicities_from_orthogonality(spec)
    values = tuple(_raw_multiplicity(spec, k) for k in range(spec.n + 1))
    if family == SchemeFamily.POLAR_2A_ODD and spec.second_ordering:
        order = second_ordering_permutation(spec.n)
        return tuple(values[order[k]] for k in range(spec.n + 1))
    return values


def _raw_multiplicity(spec: SchemeSpec, k: int) -> Fraction:
    family, q, n, m = spec.family, spec.q, spec.n, spec.m
    if family == SchemeFamily.HAMMING:
        return Fraction(binomial(n, k) * (q - 1) ** k)
    if family == SchemeFamily.JOHNSON:
        return Fraction(binomial(m + n, k) - binomial(m + n, k - 1))
    if family in AFFINE_FAMILIES:
        return _affine_weight(spec, k)
    if family == SchemeFamily.QJOHNSON:
        return q_binomial(m + n, k, q) - q_binomial(m + n, k - 1, q)
    if family in POLAR_FAMILIES:
        return _polar_multiplicity(spec, k)
    raise UnsupportedSchemeError(f"No multiplicities for {family.value}")


def _polar_multiplicity(spec: SchemeSpec, k: int) -> Fraction:
    """Standard-ordering mu_k of a polar space."""
    n, p, two_e = spec.n, spec.polar_p, spec.polar_two_e
    value = power(p, k * (k - n)) * q_binomial(n, k, p)
    value *= q_pochhammer(-polar_half_power(spec, two_e + 2), n, p)
    value /= q_pochhammer(-polar_half_power(spec, two_e - 2 * k + 2), n - k, p)
    value /= q_pochhammer(-polar_half_power(spec, 2 * k - 2 * n - two_e - 2), k, p)
    return value


def _multiplicities_from_orthogonality(spec: SchemeSpec) -> tuple:
    """mu_k = |X| / sum_i P_i(k)^2 / v_i, from the second orthogonality relation."""
    table = p_matrix(spec)
    values = []
    for k in range(spec.n + 1):
        norm = sum(table[i][k] ** 2 / valency(spec, i) for i in range(spec.n + 1))
        values.append(Fraction(spec.num_vertices) / norm)
    return tuple(values)


def halfd_table_multiplicities(spec: SchemeSpec) -> list[Fraction]:
    """The literal reading of the half-dual-polar multiplicity row: mu_k of D_m at k = 0..floor(m/2)."""
    if spec.family != SchemeFamily.HALF_D:
        raise UnsupportedSchemeError(f"table multiplicities are defined for half-d only, got {spec.family.value}")
    parent = make_scheme(SchemeFamily.POLAR_D, spec.q, spec.m)
    return [multiplicity(parent, k) for k in range(spec.n + 1)]


# P- and Q-numbers


def p_number(spec: SchemeSpec, i: int, k: int) -> Fraction:
    _check_index(spec, i, "i")
    _check_index(spec, k, "k")
    return p_matrix(spec)[i][k]


def q_number(spec: SchemeSpec, k: int, i: int) -> Fraction:
    _check_index(spec, i, "i")
    _check_index(spec, k, "k")
    return q_matrix(spec)[k][i]


@lru_cache(maxsize=None)
def p_matrix(spec: SchemeSpec) -> tuple:
    """Rows indexed by class i, columns by eigenspace k."""
    logging.debug(f"Computing P-numbers of {spec.label}")
    return tuple(tuple(_raw_p_number(spec, i, k) for k in range(spec.n + 1)) for i in range(spec.n + 1))


@lru_cache(maxsize=None)
def q_matrix(spec: SchemeSpec) -> tuple:
    """Rows indexed by eigenspace k, columns by class i; Q_k(i) = mu_k P_i(k) / v_i."""
    table = p_matrix(spec)
    return tuple(
        tuple(multiplicity(spec, k) * table[i][k] / valency(spec, i) for i in range(spec.n + 1))
        for k in range(spec.n + 1)
    )


def _raw_p_number(spec: SchemeSpec, i: int, k: int) -> Fraction:
    family = spec.family
    if family == SchemeFamily.HAMMING:
        return _krawtchouk(spec.n, spec.q, i, k)
    if family == SchemeFamily.JOHNSON:
        return _eberlein(spec.n, spec.m, i, k)
    if family in AFFINE_FAMILIES:
        return _affine_p_number(spec, i, k)
    if family == SchemeFamily.QJOHNSON:
        return _qjohnson_p_number(spec, i, k)
    if family == SchemeFamily.HALF_D:
        return p_number_hypergeometric(spec, i, k)
    if family in POLAR_FAMILIES:
        if family == SchemeFamily.POLAR_2A_ODD and spec.second_ordering:
            k = second_ordering_permutation(spec.n)[k]
        return _polar_p_number(spec, i, k)
    raise UnsupportedSchemeError(f"No P-numbers for {family.value}")


def _krawtchouk(n: int, q: int, i: int, k: int) -> Fraction:
    return Fraction(sum((-1) ** j * (q - 1) ** (i - j) * binomial(k, j) * binomial(n - k, i - j) for j in range(i + 1)))


def _eberlein(n: int, m: int, i: int, k: int) -> Fraction:
    return Fraction(
        sum((-1) ** j * binomial(k, j) * binomial(n - k, i - j) * binomial(m - k, i - j) for j in range(i + 1))
    )


def _affine_p_number(spec: SchemeSpec, i: int, k: int) -> Fraction:
    b, n = spec.b, spec.n
    base = spec.c * power(b, n)
    total = Fraction(0)
    for j in range(i + 1):
        term = power(b, triangular(i - j)) * q_binomial(n - j, n - i, b) * q_binomial(n - k, j, b) * power(base, j)
        total += term if (i - j) % 2 == 0 else -term
    return total


def _qjohnson_p_number(spec: SchemeSpec, i: int, k: int) -> Fraction:
    q, n, m = spec.q, spec.n, spec.m
    total = Fraction(0)
    for j in range(i + 1):
        term = (
            q_binomial(n - j, i - j, q)
            * q_binomial(n - k, j, q)
            * q_binomial(m + j - k, j, q)
            * power(q, j * k + triangular(i - j))
        )
        total += term if (i - j) % 2 == 0 else -term
    return total


def _polar_p_number(spec: SchemeSpec, i: int, k: int) -> Fraction:
    """Standard-ordering polar P_i(k) as a q-Krawtchouk sum."""
    n, p, two_e = spec.n, spec.polar_p, spec.polar_two_e
    total = Fraction(0)
    for ell in range(min(i, k) + 1):
        term = (
            q_binomial(n - i, k - ell, p)
            * q_binomial(i, ell, p)
            * polar_half_power(spec, ell * (2 * ell - 2 * i - two_e - 2))
        )
        total += term if ell % 2 == 0 else -term
    return _raw_valency(spec, i) * total / q_binomial(n, k, p)


def p_number_hypergeometric(spec: SchemeSpec, i: int, k: int) -> Fraction:
    """P_i(k) from the terminating basic hypergeometric series.

    Available for the matrix schemes and for the ordinary q-analogs in their
    Q-polynomial ordering (q-Johnson, the Hermitian dual polar space in the
    second ordering, half dual polar spaces).
    """
    _check_index(spec, i, "i")
    _check_index(spec, k, "k")
    b, c, n = spec.b, spec.c, spec.n
    if spec.family in AFFINE_FAMILIES:
        numerators = [power(b, -k), power(b, -i)]
        denominators = [power(c, -1) * power(b, -n), power(b, -n), b]
        weight = _affine_weight(spec, i)
    elif _is_ordinary_hypergeometric(spec):
        numerators = [power(b, -i), power(b, -k), Fraction(1, spec.q) / c * power(b, -2 * n + k)]
        denominators = [power(b, -n), power(c, -1) * power(b, -n), b]
        weight = _raw_valency(spec, i)
    else:
        raise UnsupportedSchemeError(f"No hypergeometric P-numbers for {spec.label}")

    total = Fraction(0)
    for ell in range(min(i, k) + 1):
        term = power(b, ell)
        for a in numerators:
            term *= q_pochhammer(a, ell, b)
        for a in denominators:
            term /= q_pochhammer(a, ell, b)
        total += term
    return weight * total
