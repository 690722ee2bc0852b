# helpers/bounds.py
"""
Closed-form bound evaluators and the reports that compare them against the solver.

`lp_optimum_formula` and `ekr_printed_bound` evaluate the closed forms;
`evaluate_bound` and `evaluate_ekr` put them side by side with the exact LP
and the certificate objective.
"""

import logging
import time
from fractions import Fraction
from math import prod

from helpers.certificates import (
    epsilon_nd,
    hermitian_forms_even_size,
    lp_optimum_affine,
    verify_strong_duality,
)
from helpers.delsarte_lp import lp_opt, lp_opt_set
from helpers.errors import ParameterError, UnsupportedSchemeError
from helpers.exactq import binomial, power, q_binomial, q_pochhammer
from helpers.schemes import make_scheme
from models import AFFINE_FAMILIES, BoundReport, SchemeFamily, SchemeSpec, Verdict

BCD_FAMILIES = frozenset({SchemeFamily.POLAR_B, SchemeFamily.POLAR_C, SchemeFamily.POLAR_D})
NO_FORMULA_FAMILIES = frozenset({SchemeFamily.POLAR_2A_EVEN, SchemeFamily.POLAR_2D})


def _check_d(spec: SchemeSpec, d: int):
    if not isinstance(d, int) or d < 1 or d > spec.n:
        raise ParameterError(f"d must lie in 1..{spec.n} for {spec.label}, got d={d}")


def _check_t(spec: SchemeSpec, t: int):
    if not isinstance(t, int) or t < 1 or t > spec.n:
        raise ParameterError(f"t must lie in 1..{spec.n} for {spec.label}, got t={t}")


def piret_condition(n: int, q: int, d: int):
    if q < max(d, n - d + 2):
        raise ParameterError(f"Piret condition fails: q < max{{d, n-d+2}} (q={q}, n={n}, d={d})")


def johnson_divisibility(n: int, m: int, d: int):
    """Necessary conditions for a Steiner system S(n-d+1, n, m+n)."""
    t, v = n - d + 1, m + n
    for i in range(t + 1):
        if binomial(v - i, t - i) % binomial(n - i, t - i):
            raise ParameterError(
                f"Johnson divisibility fails at i={i}: C({v - i},{t - i}) is not divisible by C({n - i},{t - i})"
            )


# LP optima


def lp_optimum_ordinary_product(spec: SchemeSpec, d: int) -> Fraction:
    """|X| prod_{i=0}^{d-2} (q b^i - 1) / (q c b^(n+i) - 1)."""
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    value = Fraction(spec.num_vertices)
    for i in range(d - 1):
        value *= (q * power(b, i) - 1) / (q * c * power(b, n + i) - 1)
    return value


def lp_optimum_formula(spec: SchemeSpec, d: int) -> Fraction:
    _check_d(spec, d)
    family, q, n = spec.family, spec.q, spec.n
    if family == SchemeFamily.HAMMING:
        piret_condition(n, q, d)
        return Fraction(q) ** (n - d + 1)
    if family == SchemeFamily.JOHNSON:
        johnson_divisibility(n, spec.m, d)
        return Fraction(binomial(spec.m + n, n - d + 1), binomial(n, n - d + 1))
    if family == SchemeFamily.HERMITIAN and d % 2 == 0:
        return hermitian_forms_even_size(spec, d)
    if family in AFFINE_FAMILIES:
        return lp_optimum_affine(spec, d)
    if family in (SchemeFamily.QJOHNSON, SchemeFamily.HALF_D):
        return lp_optimum_ordinary_product(spec, d)
    if family == SchemeFamily.POLAR_2A_ODD:
        value = lp_optimum_ordinary_product(spec, d)
        return value * epsilon_nd(n, d, q) if d % 2 == 0 else value
    if family in BCD_FAMILIES:
        return lp_optimum_bcd(family, q, n, d)
    raise UnsupportedSchemeError(f"no closed-form LP optimum for {spec.label}")


def _bcd_parity(family, n, d):
    if family in (SchemeFamily.POLAR_B, SchemeFamily.POLAR_C) and d % 2 == 0:
        raise ParameterError(f"the {family.value} closed form covers odd d only, got d={d}")
    if family == SchemeFamily.POLAR_D and d % 2:
        raise ParameterError(f"the polar-d closed form covers even d only, got d={d}")
    if family not in BCD_FAMILIES:
        raise UnsupportedSchemeError(f"{family.value} is not one of polar-b, polar-c, polar-d")
    if d < 1 or d > n:
        raise ParameterError(f"d must lie in 1..{n}, got d={d}")


def lp_optimum_bcd(family, q: int, n: int, d: int) -> Fraction:
    family = SchemeFamily(family)
    _bcd_parity(family, n, d)
    size = Fraction(make_scheme(family, q, n).num_vertices)
    shift = 0 if n % 2 else 1
    if family == SchemeFamily.POLAR_D:
        return size / 2 * prod(
            (Fraction(q ** (2 * i - 1) - 1, q ** (n + 2 * i - 1 - shift) - 1) for i in range(1, d // 2)), start=Fraction(1)
        )
    return size * prod(
        (Fraction(q ** (2 * i - 1) - 1, q ** (n + 2 * i - 1 + shift) - 1) for i in range(1, (d - 1) // 2 + 1)),
        start=Fraction(1),
    )


def bcd_reduction(family, q: int, n: int, d: int):
    """(half dual polar spec, reduced d) carrying the same LP optimum."""
    family = SchemeFamily(family)
    _bcd_parity(family, n, d)
    if family == SchemeFamily.POLAR_D:
        return make_scheme(SchemeFamily.HALF_D, q, m=n), d // 2
    return make_scheme(SchemeFamily.HALF_D, q, m=n + 1), (d + 1) // 2


def lp_optimum_bcd_by_reduction(family, q: int, n: int, d: int) -> Fraction:
    reduced, reduced_d = bcd_reduction(family, q, n, d)
    return lp_opt(reduced, reduced_d)


def polar_distance_set(spec: SchemeSpec, d: int) -> list[int]:
    """{d..n}, restricted to even classes for D_n with even d."""
    if spec.family == SchemeFamily.POLAR_D and d % 2 == 0:
        return [i for i in range(d, spec.n + 1) if i % 2 == 0]
    return list(range(d, spec.n + 1))


def lp_opt_polar_direct(family, q: int, n: int, d: int) -> Fraction:
    spec = make_scheme(family, q, n)
    _check_d(spec, d)
    return lp_opt_set(spec, polar_distance_set(spec, d))


def conjectured_dn_value(q: int, n: int, d: int) -> Fraction:
    size = Fraction(make_scheme(SchemeFamily.POLAR_D, q, n).num_vertices)
    return size * prod(
        (Fraction(q ** (2 * i - 1) - 1, q ** (n + 2 * i - 1) - 1) for i in range(1, (d - 1) // 2 + 1)),
        start=Fraction(1),
    )


def check_conjecture_dn(q: int, n: int, d: int) -> BoundReport:
    if n % 2 == 0 or d % 2 == 0:
        raise ParameterError(f"the D_n conjecture is stated for odd n and odd d, got n={n}, d={d}")
    if d < 1 or d > n:
        raise ParameterError(f"d must lie in 1..{n}, got d={d}")
    started = time.perf_counter()
    spec = make_scheme(SchemeFamily.POLAR_D, q, n)
    conjectured = conjectured_dn_value(q, n, d)
    solved = lp_opt(spec, d)
    verdict = Verdict.MATCH if solved == conjectured else Verdict.MISMATCH
    logging.info(f"D_{n} conjecture at q={q}, d={d}: solver {solved}, conjectured {conjectured} -> {verdict.value}")
    return BoundReport(
        family=spec.family.value,
        q=q,
        n=n,
        d=d,
        formula_value=conjectured,
        solver_value=solved,
        verdict=verdict,
        elapsed_ms=(time.perf_counter() - started) * 1000,
        note="conjecture",
    )


# EKR bounds


def _ekr_distance(spec: SchemeSpec, t: int):
    """Smallest distance in the complement of the distance set of a t-intersecting family, or None."""
    if spec.family in (SchemeFamily.ALTERNATING, SchemeFamily.HALF_D):
        smallest = (spec.m - t) // 2 + 1
        return smallest if smallest <= spec.n else None
    return spec.n - t + 1


def _ekr_size_check(spec: SchemeSpec, t: int):
    if spec.family in (SchemeFamily.ALTERNATING, SchemeFamily.HALF_D):
        if not isinstance(t, int) or t < 1 or t > spec.m:
            raise ParameterError(f"t must lie in 1..{spec.m} for {spec.label}, got t={t}")
    else:
        _check_t(spec, t)
    if spec.family == SchemeFamily.HAMMING:
        q, n = spec.q, spec.n
        if q < max(t + 1, n - t + 1):
            raise ParameterError(f"EKR condition fails: q < max{{t+1, n-t+1}} (q={q}, n={n}, t={t})")


def ekr_bound(spec: SchemeSpec, t: int) -> Fraction:
    """|X| / LP of the complementary distance set."""
    _ekr_size_check(spec, t)
    d = _ekr_distance(spec, t)
    if d is None:
        return Fraction(spec.num_vertices)
    if spec.family in BCD_FAMILIES:
        optimum = lp_optimum_bcd_by_reduction(spec.family, spec.q, spec.n, d)
    else:
        optimum = lp_opt(spec, d)
    return Fraction(spec.num_vertices) / optimum


def ekr_printed_bound(spec: SchemeSpec, t: int) -> Fraction:
    _ekr_size_check(spec, t)
    family, q, n = spec.family, spec.q, spec.n
    Q = Fraction(q)
    if family == SchemeFamily.JOHNSON:
        return Fraction(binomial(spec.m + n - t, n - t))
    if family == SchemeFamily.HAMMING:
        return Q ** (n - t)
    if family == SchemeFamily.QJOHNSON:
        return q_binomial(spec.m + n - t, n - t, q)
    if family == SchemeFamily.BILINEAR:
        return Q ** (spec.m * (n - t))
    if family == SchemeFamily.ALTERNATING:
        return _ekr_alternating(q, spec.m, t)
    if family == SchemeFamily.HERMITIAN:
        return _ekr_hermitian(q, n, t)
    if family == SchemeFamily.POLAR_2A_ODD:
        return _ekr_hermitian_polar(q, n, t)
    if family in (SchemeFamily.POLAR_B, SchemeFamily.POLAR_C):
        if (n - t) % 2:
            raise ParameterError(f"{family.value} EKR closed form needs n and t of equal parity, got n={n}, t={t}")
        shift = 0 if n % 2 else 1
        return prod(
            (Fraction(q ** (n + 2 * i - 1 + shift) - 1, q ** (2 * i - 1) - 1) for i in range(1, (n - t) // 2 + 1)),
            start=Fraction(1),
        )
    if family == SchemeFamily.POLAR_D:
        if (n - t) % 2 == 0:
            raise ParameterError(f"polar-d EKR closed form needs n and t of different parity, got n={n}, t={t}")
        shift = 0 if n % 2 else 1
        return 2 * prod(
            (Fraction(q ** (n + 2 * i - 1 - shift) - 1, q ** (2 * i - 1) - 1) for i in range(1, (n - t - 1) // 2 + 1)),
            start=Fraction(1),
        )
    if family == SchemeFamily.HALF_D:
        m = spec.m
        shift = 0 if m % 2 == 0 else 1
        return prod(
            (Fraction(q ** (m + 2 * i + shift) - 1, q ** (2 * i + 1) - 1) for i in range((m - t - 2) // 2 + 1)),
            start=Fraction(1),
        )
    raise UnsupportedSchemeError(f"no EKR closed form for {spec.label}")


def _ekr_alternating(q: int, m: int, t: int) -> Fraction:
    Q = Fraction(q)
    if m % 2 == 0 and t % 2 == 0:
        return Q ** ((m - t) * (m - 1) // 2)
    if m % 2 and t % 2:
        return Q ** (m * (m - t) // 2)
    if m % 2 == 0:
        return Q ** ((m - t - 1) * (m - 1) // 2)
    return Q ** (m * (m - t - 1) // 2)


def _ekr_hermitian(q: int, n: int, t: int) -> Fraction:
    top = Fraction(q) ** (n * (n - t))
    if (n - t) % 2 == 0:
        return top
    if n % 2 == 0:
        return top * (q ** (t + 1) + q ** t) / (q ** (n + t) + q ** n - q ** (t + 1) + 1)
    return top * (q ** (t + 1) + q ** t) / (q ** (n + t) - q ** n + q ** (t + 1) + 1)


def _ekr_hermitian_polar(q: int, n: int, t: int) -> Fraction:
    value = prod(
        (
            Fraction(q ** (n + 1 + i) + (-1) ** (n + i), q ** (i + 1) + (-1) ** (i + 1))
            for i in range(n - t)
        ),
        start=Fraction(1),
    )
    if (n - t) % 2 == 0:
        return value
    return value * (-1) ** (n + 1) / epsilon_nd(n, n - t + 1, q)


def ekr_simple_bound(family, q: int, n: int, t: int) -> Fraction:
    family = SchemeFamily(family)
    if not 1 < t < n:
        raise ParameterError(f"the simplified EKR bounds need 1 < t < n, got n={n}, t={t}")
    if q < 2:
        raise ParameterError(f"q must be >= 2, got q={q}")
    Q = Fraction(q)
    if family == SchemeFamily.POLAR_2A_ODD:
        if (n - t) % 2 == 0:
            return 8 * Q ** (n * (n - t))
        if n % 2:
            return 43 * Q ** (n * (n - t - 1) + 1)
        return 26 * Q ** (n * (n - t - 1) + 1)
    if family in (SchemeFamily.POLAR_B, SchemeFamily.POLAR_C):
        if n % 2 and t % 2:
            return 4 * Q ** (n * (n - t) // 2)
        if n % 2 == 0 and t % 2 == 0:
            return 4 * Q ** ((n + 1) * (n - t) // 2)
        raise ParameterError(f"{family.value} simplified bound needs n and t of equal parity, got n={n}, t={t}")
    if family == SchemeFamily.POLAR_D:
        if n % 2 and t % 2 == 0:
            return 8 * Q ** (n * (n - t - 1) // 2)
        if n % 2 == 0 and t % 2:
            return 8 * Q ** ((n - 1) * (n - t - 1) // 2)
        raise ParameterError(f"polar-d simplified bound needs n and t of different parity, got n={n}, t={t}")
    raise UnsupportedSchemeError(f"no simplified EKR bound for {family.value}")


# Reports


def _verdict(values, unverified=False) -> Verdict:
    present = [v for v in values if v is not None]
    if unverified:
        return Verdict.UNVERIFIED
    if len(set(present)) <= 1:
        return Verdict.MATCH
    return Verdict.MISMATCH


def has_closed_form(family, d: int) -> bool:
    family = SchemeFamily(family)
    if family in NO_FORMULA_FAMILIES:
        return False
    if family == SchemeFamily.POLAR_D:
        return d % 2 == 0
    if family in (SchemeFamily.POLAR_B, SchemeFamily.POLAR_C):
        return d % 2 == 1
    return True


def evaluate_bound(spec: SchemeSpec, d: int) -> BoundReport:
    _check_d(spec, d)
    started = time.perf_counter()
    family = spec.family
    note = None
    formula = solver = certificate = None
    unverified = certificate_failed = False

    if not has_closed_form(family, d):
        solver = lp_opt(spec, d)
        unverified = True
        note = "no closed form; see conjecture-dn" if family == SchemeFamily.POLAR_D else "no closed form"
    elif family in BCD_FAMILIES:
        formula = lp_optimum_bcd(family, spec.q, spec.n, d)
        solver = lp_optimum_bcd_by_reduction(family, spec.q, spec.n, d)
        note = "half dual polar reduction"
    else:
        formula = lp_optimum_formula(spec, d)
        solver = lp_opt(spec, d)
        if family == SchemeFamily.JOHNSON:
            unverified = True
            note = "requires m sufficiently large"
        try:
            pair = verify_strong_duality(spec, d)
            certificate = pair.dual_objective
            certificate_failed = not pair.verified
            if certificate_failed:
                note = f"certificate check failed: {pair.primal_violations + pair.dual_violations}"
        except UnsupportedSchemeError as e:
            logging.debug(f"No certificate for {spec.label}, d={d}: {str(e)}")

    verdict = Verdict.MISMATCH if certificate_failed else _verdict([formula, solver, certificate], unverified)
    return BoundReport(
        family=family.value,
        q=spec.q,
        n=spec.n,
        m=spec.m,
        d=d,
        formula_value=formula,
        solver_value=solver,
        certificate_value=certificate,
        verdict=verdict,
        elapsed_ms=(time.perf_counter() - started) * 1000,
        note=note,
    )


def evaluate_ekr(spec: SchemeSpec, t: int) -> BoundReport:
    started = time.perf_counter()
    printed = ekr_printed_bound(spec, t)
    solved = ekr_bound(spec, t)
    unverified = spec.family == SchemeFamily.JOHNSON
    return BoundReport(
        family=spec.family.value,
        q=spec.q,
        n=spec.n,
        m=spec.m,
        t=t,
        formula_value=printed,
        solver_value=solved,
        verdict=_verdict([printed, solved], unverified),
        elapsed_ms=(time.perf_counter() - started) * 1000,
        note="requires m sufficiently large" if unverified else None,
    )


# Inequality lemmas


def epsilon_bounds_violations(n: int, d: int, q: int) -> list[str]:
    epsilon = epsilon_nd(n, d, q)
    if n % 2 == 0:
        lower = -Fraction(q ** (n + d - 1) + 1, q ** (d - 1) - 1)
        upper = -Fraction(q ** n, q + 1)
    else:
        lower = Fraction(q ** (d - 2) * (q ** (n - d + 1) - 1), 2)
        upper = Fraction(q ** (n + d - 1) - 1, q ** (d - 1) - 1)
    violations = []
    if not epsilon > lower:
        violations.append(f"epsilon({n},{d}) = {epsilon} is not above {lower} at q={q}")
    if not epsilon < upper:
        violations.append(f"epsilon({n},{d}) = {epsilon} is not below {upper} at q={q}")
    return violations


def product_bounds_violations(q: int, n_max: int = 20) -> list[str]:
    violations = []
    plus, minus = Fraction(1), Fraction(1)
    for i in range(1, n_max + 1):
        plus *= 1 + Fraction(1, q ** i)
        minus *= 1 - Fraction(1, q ** i)
        if not plus < Fraction(5, 2):
            violations.append(f"prod (1 + q^-i) up to n={i} is {plus} >= 5/2 at q={q}")
        if not minus >= Fraction(1, 4):
            violations.append(f"prod (1 - q^-i) up to n={i} is {minus} < 1/4 at q={q}")
    return violations


def size_sandwich_violations(spec: SchemeSpec, d: int) -> list[str]:
    if spec.family != SchemeFamily.HERMITIAN or d % 2:
        raise UnsupportedSchemeError(f"the size sandwich applies to even d on Hermitian forms, got {spec.label}, d={d}")
    q, n = spec.q, spec.n
    size = hermitian_forms_even_size(spec, d)
    exponent = n * (n - d + 2)
    lower = Fraction(q ** (exponent - 1), 3)
    upper = Fraction(q ** exponent, 2)
    if lower <= size <= upper:
        return []
    return [f"|Y| = {size} outside [{lower}, {upper}] for {spec.label}, d={d}"]


def qbinomial_ratio_violations(n: int, q: int) -> list[str]:
    """Growth estimates for Gaussian binomials at the negative base b = -q."""
    b = -q
    violations = []
    for i in range(n + 1):
        top = n - i
        for j in range(top - 1):
            ratio = abs(q_binomial(top, j, b)) / abs(q_binomial(top, j + 2, b))
            floor = power(q, -2 * n + 4 * j + 2 * i + 2)
            if ratio < floor:
                violations.append(f"|[{top},{j}]| / |[{top},{j + 2}]| = {ratio} < {floor} at q={q}")
        if top >= 1 and abs(q_binomial(top, 1, b)) > power(q, top - 1):
            violations.append(f"|[{top},1]| exceeds q^{top - 1} at q={q}")
        if top >= 2 and abs(q_binomial(top, 2, b)) > power(q, 2 * top - 2) / 3:
            violations.append(f"|[{top},2]| exceeds q^{2 * top - 2}/3 at q={q}")
    return violations


# (n % 2, (i + j) % 2) -> (lower, upper) on 1 - eps_{i,j}
HERMITIAN_ERROR_BOUNDS = {
    (1, 1): (Fraction(29, 32), Fraction(2)),
    (0, 0): (Fraction(125, 128), Fraction(27, 16)),
    (1, 0): (Fraction(186, 256), Fraction(1)),
    (0, 1): (Fraction(31, 64), Fraction(2051, 2048)),
}
HERMITIAN_POLAR_ERROR_BOUNDS = {
    (1, 1): (Fraction(31, 32), Fraction(2)),
    (0, 0): (Fraction(61, 64), Fraction(51, 32)),
    (1, 0): (Fraction(191, 256), Fraction(1)),
    (0, 1): (Fraction(109, 128), Fraction(259, 256)),
}
# At q = 2 the even-n, odd i+j terms of the polar error dip to about 0.628 (n = 4, d = 2).
HERMITIAN_POLAR_BINARY_LOWER = Fraction(5, 8)


def _check_error_term_range(n: int, d: int, n_min: int):
    if d % 2 or d < 2 or d >= n or n < n_min:
        raise ParameterError(f"error terms need even d with 2 <= d < n and n >= {n_min}, got n={n}, d={d}")


def hermitian_error_terms(q: int, n: int, d: int) -> list[Fraction]:
    """1 - eps_{i,j} for the even-d Hermitian forms distribution, indexed by s = i + j."""
    _check_error_term_range(n, d, 3)
    spec = make_scheme(SchemeFamily.HERMITIAN, q, n)
    b = spec.b
    size = hermitian_forms_even_size(spec, d)
    tail = 1 + (-1) ** n * Fraction(q ** (n * (n - d + 1))) / size
    terms = []
    for s in range(n - d + 1):
        epsilon = (-1) ** s * power(b, n * s) / size + (power(b, s) - 1) / (power(b, n - d + 1) - 1) * tail
        terms.append(1 - epsilon)
    return terms


def hermitian_polar_error_terms(q: int, n: int, d: int) -> list[Fraction]:
    """1 - eps_{i,j} for the even-d Hermitian polar distribution, indexed by s = i + j."""
    _check_error_term_range(n, d, 4)
    b = Fraction(-q)
    inverse = 1 / epsilon_nd(n, d, q)
    terms = []
    for s in range(n - d + 1):
        k = n - s - d + 1
        first = (1 - inverse) * power(b, k) * (power(b, n + d - 1) - 1) * (power(b, s) - 1)
        first /= (power(b, n - d + 1) - 1) * (power(b, 2 * n - s) - 1)
        second = q_pochhammer(q * power(b, d - 1), k, b) / q_pochhammer(power(b, n + d), k, b) * inverse
        terms.append(1 - first - second)
    return terms


def hermitian_error_term_violations(q: int, n: int, d: int) -> list[str]:
    violations = []
    for s, value in enumerate(hermitian_error_terms(q, n, d)):
        lower, upper = HERMITIAN_ERROR_BOUNDS[(n % 2, s % 2)]
        if n % 2 and s == 0:
            lower = Fraction(253, 256)
        if not lower <= value <= upper:
            violations.append(f"1 - eps at i+j={s} is {value}, outside [{lower}, {upper}] (q={q}, n={n}, d={d})")
    return violations


def hermitian_polar_error_term_violations(q: int, n: int, d: int) -> list[str]:
    violations = []
    for s, value in enumerate(hermitian_polar_error_terms(q, n, d)):
        lower, upper = HERMITIAN_POLAR_ERROR_BOUNDS[(n % 2, s % 2)]
        if n % 2 and s == 0:
            lower = Fraction(255, 256)
        elif q == 2 and n % 2 == 0 and s % 2:
            lower = HERMITIAN_POLAR_BINARY_LOWER
        if not lower < value < upper:
            violations.append(f"1 - eps at i+j={s} is {value}, outside ({lower}, {upper}) (q={q}, n={n}, d={d})")
    return violations

