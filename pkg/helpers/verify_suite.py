# helpers/verify_suite.py
"""
The invariant grid behind `verify`: exact identity, LP and certificate checks
over every scheme the grid produces.

Each check returns a list of `CheckResult`; `run_checks` runs a selection and
summarises it. Results marked `reported_only` never count as failures.
"""

import logging
from fractions import Fraction
from itertools import combinations

from pydantic import BaseModel, Field

from helpers.bounds import (
    BCD_FAMILIES,
    check_conjecture_dn as conjecture_dn_report,
    ekr_printed_bound,
    ekr_simple_bound,
    epsilon_bounds_violations,
    evaluate_bound,
    evaluate_ekr,
    hermitian_error_term_violations,
    hermitian_polar_error_term_violations,
    lp_opt_polar_direct,
    lp_optimum_bcd,
    lp_optimum_bcd_by_reduction,
    product_bounds_violations,
    qbinomial_ratio_violations,
    size_sandwich_violations,
)
from helpers.certificates import (
    c_inverse,
    c_matrix,
    certificate_vectors,
    dual_distribution,
    qc_inverse_product,
    verify_strong_duality,
)
from helpers.delsarte_lp import lp_opt_set
from helpers.errors import CapExceededError, DelsarteError, ParameterError, UnsupportedSchemeError
from helpers.exactq import kronecker, power, q_binomial, q_pochhammer, triangular
from helpers.finite_field import is_prime
from helpers.oracle import ORACLE_FAMILIES, build_instance, empirical_valencies
from helpers.schemes import (
    halfd_table_multiplicities,
    make_scheme,
    multiplicity,
    p_matrix,
    p_number_hypergeometric,
    q_matrix,
    valency,
)
from models import AFFINE_FAMILIES, SchemeFamily, SchemeSpec, Verdict

DEFAULT_Q_VALUES = (2, 3)
DEFAULT_N_VALUES = (1, 2, 3, 4)
ORACLE_VERTEX_LIMIT = 1024


class CheckResult(BaseModel):
    check: str
    case: str
    passed: bool
    detail: str = ""
    reported_only: bool = False


class VerifySummary(BaseModel):
    results: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed and not r.reported_only)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if not r.passed and not r.reported_only)

    @property
    def reported(self) -> int:
        return sum(1 for r in self.results if r.reported_only)

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _result(check, case, problems, reported_only=False) -> CheckResult:
    return CheckResult(
        check=check,
        case=case,
        passed=not problems,
        detail="; ".join(problems[:5]),
        reported_only=reported_only,
    )


def scheme_grid(q_values=DEFAULT_Q_VALUES, n_values=DEFAULT_N_VALUES) -> list[SchemeSpec]:
    """Every family at every (q, n), with m from n to n+2 where a second size applies."""
    specs = []

    def add(family, q, n=None, m=None, **kwargs):
        try:
            specs.append(make_scheme(family, q, n=n, m=m, **kwargs))
        except DelsarteError as e:
            logging.debug(f"Skipping {family.value} q={q} n={n} m={m}: {str(e)}")

    for q in q_values:
        for n in n_values:
            add(SchemeFamily.HAMMING, q, n)
            if q == q_values[0]:
                for m in range(n, n + 3):
                    add(SchemeFamily.JOHNSON, q, n, m)
            for m in range(n, n + 3):
                add(SchemeFamily.QJOHNSON, q, n, m)
                add(SchemeFamily.BILINEAR, q, n, m)
            for m in (2 * n, 2 * n + 1):
                add(SchemeFamily.ALTERNATING, q, m=m)
                add(SchemeFamily.HALF_D, q, m=m)
            add(SchemeFamily.HERMITIAN, q, n)
            add(SchemeFamily.POLAR_2A_ODD, q, n)
            add(SchemeFamily.POLAR_2A_ODD, q, n, second_ordering=False)
            for family in (
                SchemeFamily.POLAR_2A_EVEN,
                SchemeFamily.POLAR_B,
                SchemeFamily.POLAR_C,
                SchemeFamily.POLAR_D,
                SchemeFamily.POLAR_2D,
            ):
                add(family, q, n)
    return specs


def _is_ordinary(spec: SchemeSpec) -> bool:
    return spec.family in (SchemeFamily.QJOHNSON, SchemeFamily.HALF_D) or (
        spec.family == SchemeFamily.POLAR_2A_ODD and spec.second_ordering
    )


# q-binomials


def check_qbinomial(q_values, n_values) -> list[CheckResult]:
    results = []
    top = max(n_values) + 2
    for q in q_values:
        for base in (Fraction(q), Fraction(-q), Fraction(q * q), Fraction(1, q)):
            problems = []
            for n in range(1, top + 1):
                for k in range(n + 1):
                    value = q_binomial(n, k, base)
                    if value != q_binomial(n, n - k, base):
                        problems.append(f"[{n},{k}] is not symmetric")
                    if 0 < k < n and value != q_binomial(n - 1, k - 1, base) + power(base, k) * q_binomial(n - 1, k, base):
                        problems.append(f"Pascal rule fails at [{n},{k}]")
            for i in range(top + 1):
                for k in range(i, top + 1):
                    total = sum(
                        ((-1) ** (k - j) * power(base, triangular(k - j)) * q_binomial(j, i, base) * q_binomial(k, j, base))
                        for j in range(i, k + 1)
                    )
                    if total != kronecker(i, k):
                        problems.append(f"inversion formula fails at i={i}, k={k}")
            results.append(_result("qbinomial", f"base={base}", problems))
    return results


# Valencies and multiplicities


def check_valencies(specs, oracle_limit=ORACLE_VERTEX_LIMIT) -> list[CheckResult]:
    results = []
    for spec in specs:
        n, size = spec.n, spec.num_vertices
        v = [valency(spec, i) for i in range(n + 1)]
        mu = [multiplicity(spec, k) for k in range(n + 1)]
        P, Q = p_matrix(spec), q_matrix(spec)
        problems = []
        if sum(v) != size:
            problems.append(f"sum of valencies {sum(v)} != |X| = {size}")
        if sum(mu) != size:
            problems.append(f"sum of multiplicities {sum(mu)} != |X| = {size}")
        problems += [f"P_{i}(0) = {P[i][0]} != v_{i}" for i in range(n + 1) if P[i][0] != v[i]]
        problems += [f"Q_{k}(0) = {Q[k][0]} != mu_{k}" for k in range(n + 1) if Q[k][0] != mu[k]]
        problems += [f"P_0({k}) != 1" for k in range(n + 1) if P[0][k] != 1]
        if spec.family in AFFINE_FAMILIES and power(spec.c * power(spec.b, n), n) != size:
            problems.append("(c b^n)^n != |X|")
        if spec.family in ORACLE_FAMILIES and is_prime(spec.q) and size <= oracle_limit:
            try:
                counted = empirical_valencies(build_instance(spec.family, spec.q, n=spec.n, m=spec.m, cap=oracle_limit))
                if counted.entries != v:
                    problems.append(f"counted valencies {counted.entries} != {v}")
            except CapExceededError:
                pass
        results.append(_result("valencies", spec.label, problems))
    return results


def check_halfd_multiplicities(specs) -> list[CheckResult]:
    """Multiplicities from orthogonality against the literal table row; differences are reported."""
    results = []
    for spec in specs:
        if spec.family != SchemeFamily.HALF_D:
            continue
        derived = [multiplicity(spec, k) for k in range(spec.n + 1)]
        table = halfd_table_multiplicities(spec)
        problems = [] if sum(derived) == spec.num_vertices else [f"derived multiplicities sum to {sum(derived)}"]
        results.append(_result("halfd-multiplicities", spec.label, problems))
        if derived != table:
            results.append(
                _result(
                    "halfd-multiplicities",
                    spec.label,
                    [f"table row {table} differs from derived {derived}"],
                    reported_only=True,
                )
            )
    return results


# Orthogonality and identities


def check_orthogonality(specs) -> list[CheckResult]:
    results = []
    for spec in specs:
        n, size = spec.n, spec.num_vertices
        P = p_matrix(spec)
        v = [valency(spec, i) for i in range(n + 1)]
        mu = [multiplicity(spec, k) for k in range(n + 1)]
        problems = []
        for i in range(n + 1):
            for j in range(n + 1):
                total = sum((mu[k] * P[i][k] * P[j][k] for k in range(n + 1)), Fraction(0))
                if total != size * v[i] * kronecker(i, j):
                    problems.append(f"first relation fails at i={i}, j={j}: {total}")
        for k in range(n + 1):
            for ell in range(n + 1):
                total = sum((P[i][k] * P[i][ell] / v[i] for i in range(n + 1)), Fraction(0))
                if total != Fraction(size) / mu[k] * kronecker(k, ell):
                    problems.append(f"second relation fails at k={k}, l={ell}: {total}")
        results.append(_result("orthogonality", spec.label, problems))
    return results


def _ordinary_identity_rhs(spec: SchemeSpec, j: int, k: int) -> Fraction:
    b, c, q, n = spec.b, spec.c, spec.q, spec.n
    return (
        power(b, k * (n - j))
        * q_binomial(n - k, n - j, b)
        * q_pochhammer(q * c * power(b, n - k), n - j, b)
        / q_pochhammer(q, n - j, b)
    )


def check_identities(specs) -> list[CheckResult]:
    results = []
    for spec in specs:
        n, size, b = spec.n, spec.num_vertices, spec.b
        P, Q = p_matrix(spec), q_matrix(spec)
        v = [valency(spec, i) for i in range(n + 1)]
        mu = [multiplicity(spec, k) for k in range(n + 1)]
        problems = []
        for i in range(n + 1):
            for j in range(n + 1):
                total = sum((P[i][k] * Q[k][j] for k in range(n + 1)), Fraction(0)) / size
                if total != kronecker(i, j):
                    problems.append(f"PQ = |X| I fails at ({i},{j})")
                if mu[j] * P[i][j] != v[i] * Q[j][i]:
                    problems.append(f"mu_k P_i(k) = v_i Q_k(i) fails at i={i}, k={j}")
        for k in range(n + 1):
            row_sum = sum((P[i][k] for i in range(n + 1)), Fraction(0))
            if row_sum != size * kronecker(k, 0):
                problems.append(f"sum_i P_i({k}) = {row_sum}")

        if spec.family in AFFINE_FAMILIES:
            base = spec.c * power(b, n)
            for j in range(n + 1):
                for k in range(n + 1):
                    lhs = sum((q_binomial(n - i, j, b) * P[i][k] for i in range(n + 1)), Fraction(0))
                    if lhs != q_binomial(n - k, n - j, b) * power(base, n - j):
                        problems.append(f"affine P-identity fails at j={j}, k={k}")
                    if P[j][k] != Q[j][k]:
                        problems.append(f"P_{j}({k}) != Q_{j}({k})")
        if _is_ordinary(spec):
            for j in range(n + 1):
                for k in range(n + 1):
                    lhs = sum((q_binomial(n - i, j, b) * P[i][k] for i in range(n + 1)), Fraction(0))
                    if lhs != _ordinary_identity_rhs(spec, j, k):
                        problems.append(f"ordinary P-identity fails at j={j}, k={k}")
            for i in range(n + 1):
                for j in range(n + 1):
                    lhs = sum((_ordinary_identity_rhs(spec, j, k) * Q[k][i] for k in range(n + 1)), Fraction(0))
                    if lhs != size * q_binomial(n - i, j, b):
                        problems.append(f"ordinary Q-identity fails at i={i}, j={j}")
        if spec.family in AFFINE_FAMILIES or _is_ordinary(spec):
            for i in range(n + 1):
                for k in range(n + 1):
                    if P[i][k] != p_number_hypergeometric(spec, i, k):
                        problems.append(f"hypergeometric P_{i}({k}) disagrees")
        results.append(_result("identities", spec.label, problems))
    return results


def _matmul(left, right):
    return [
        [sum((left[i][t] * right[t][j] for t in range(len(right))), Fraction(0)) for j in range(len(right[0]))]
        for i in range(len(left))
    ]


def check_qc_inverse(specs) -> list[CheckResult]:
    results = []
    for spec in specs:
        if not _is_ordinary(spec):
            continue
        n = spec.n
        C, C_inv = c_matrix(spec), c_inverse(spec)
        Q = [list(row) for row in q_matrix(spec)]
        product = [list(row) for row in qc_inverse_product(spec)]
        problems = []
        identity = [[Fraction(kronecker(i, j)) for j in range(n + 1)] for i in range(n + 1)]
        if _matmul(C, C_inv) != identity:
            problems.append("C C^-1 != I")
        if _matmul(product, C) != Q:
            problems.append("(QC^-1) C != Q")
        if _matmul(Q, C_inv) != product:
            problems.append("closed form of QC^-1 differs from Q times the inverse of C")
        results.append(_result("qc-inverse", spec.label, problems))
    return results


# Linear programs


def _lp(spec, D) -> Fraction:
    return lp_opt_set(spec, D) if D else Fraction(1)


def check_complement_product(specs, n_max: int = 3) -> list[CheckResult]:
    """LP(D) LP(complement of D) <= |X| for every nonempty D."""
    results = []
    for spec in specs:
        if spec.n > n_max:
            continue
        classes = list(range(1, spec.n + 1))
        problems = []
        for size in range(1, spec.n + 1):
            for D in combinations(classes, size):
                complement = [i for i in classes if i not in D]
                product = _lp(spec, D) * _lp(spec, complement)
                if product > spec.num_vertices:
                    problems.append(f"LP({list(D)}) LP({complement}) = {product} > {spec.num_vertices}")
        results.append(_result("complement-product", spec.label, problems))
    return results


def _covered_cases(specs):
    for spec in specs:
        for d in range(1, spec.n + 1):
            try:
                yield spec, d, certificate_vectors(spec, d)
            except (UnsupportedSchemeError, ParameterError) as e:
                logging.debug(f"No certificate for {spec.label}, d={d}: {str(e)}")


def check_certificates(specs) -> list[CheckResult]:
    results = []
    for spec, d, _ in _covered_cases(specs):
        pair = verify_strong_duality(spec, d)
        problems = pair.primal_violations + pair.dual_violations
        if not pair.duality_gap_zero:
            problems.append(f"duality gap: primal {pair.primal_objective}, dual {pair.dual_objective}")
        report = evaluate_bound(spec, d)
        if report.verdict == Verdict.MISMATCH:
            problems.append(
                f"formula {report.formula_value}, solver {report.solver_value}, certificate {report.certificate_value}"
            )
        results.append(_result("certificates", f"{spec.label} d={d}", problems))
    return results


def check_nonnegativity(specs) -> list[CheckResult]:
    results = []
    for spec, d, (inner, dual_vector, source) in _covered_cases(specs):
        dual = dual_distribution(spec, inner)
        problems = [f"A_{i} = {x} < 0" for i, x in enumerate(inner.entries) if x < 0]
        problems += [f"A'_{k} = {x} < 0" for k, x in enumerate(dual.entries) if x < 0]
        problems += [f"y_{k} = {x} < 0" for k, x in enumerate(dual_vector.entries) if x < 0]
        results.append(_result("nonnegativity", f"{spec.label} d={d} ({source})", problems))
    return results


def check_bcd_reduction(q_values, n_values) -> list[CheckResult]:
    results = []
    for q in q_values:
        for n in n_values:
            for family in sorted(BCD_FAMILIES, key=lambda f: f.value):
                parity = 0 if family == SchemeFamily.POLAR_D else 1
                for d in range(1, n + 1):
                    if d % 2 != parity:
                        continue
                    closed = lp_optimum_bcd(family, q, n, d)
                    reduced = lp_optimum_bcd_by_reduction(family, q, n, d)
                    direct = lp_opt_polar_direct(family, q, n, d)
                    problems = []
                    if closed != reduced:
                        problems.append(f"closed form {closed} != reduced LP {reduced}")
                    if family == SchemeFamily.POLAR_D and direct != closed:
                        problems.append(f"direct LP {direct} != closed form {closed}")
                    if direct > closed:
                        problems.append(f"direct LP {direct} exceeds closed form {closed}")
                    results.append(_result("bcd-reduction", f"{family.value} q={q} n={n} d={d}", problems))
    return results


def check_ekr(specs, q_values, simple_n_max: int = 7) -> list[CheckResult]:
    results = []
    for spec in specs:
        if spec.family in (SchemeFamily.POLAR_2A_EVEN, SchemeFamily.POLAR_2D) or (
            spec.family == SchemeFamily.POLAR_2A_ODD and not spec.second_ordering
        ):
            continue
        top = spec.m if spec.family in (SchemeFamily.ALTERNATING, SchemeFamily.HALF_D) else spec.n
        previous = None
        problems = []
        for t in range(1, top + 1):
            try:
                report = evaluate_ekr(spec, t)
            except ParameterError as e:
                logging.debug(f"EKR skipped for {spec.label}, t={t}: {str(e)}")
                previous = None
                continue
            if report.verdict == Verdict.MISMATCH:
                problems.append(f"t={t}: printed {report.formula_value} != LP route {report.solver_value}")
            if previous is not None and report.solver_value > previous:
                problems.append(f"t={t}: bound {report.solver_value} exceeds the bound at t={t - 1}")
            previous = report.solver_value
        results.append(_result("ekr", spec.label, problems))

    for q in q_values:
        problems = []
        for family in (SchemeFamily.POLAR_2A_ODD, SchemeFamily.POLAR_B, SchemeFamily.POLAR_C, SchemeFamily.POLAR_D):
            for n in range(3, simple_n_max + 1):
                spec = make_scheme(family, q, n)
                for t in range(2, n):
                    try:
                        simple = ekr_simple_bound(family, q, n, t)
                        printed = ekr_printed_bound(spec, t)
                    except ParameterError:
                        continue
                    if printed > simple:
                        problems.append(f"{family.value} n={n} t={t}: {printed} > simplified {simple}")
        results.append(_result("ekr", f"simplified bounds q={q}", problems))
    return results


def check_inequalities(q_values, n_values, n_max: int = 8) -> list[CheckResult]:
    results = []
    for q in q_values:
        problems = []
        for n in range(2, n_max + 1):
            for d in range(2, n + 1, 2):
                problems += epsilon_bounds_violations(n, d, q)
        results.append(_result("inequalities", f"epsilon bounds q={q}", problems))
        results.append(_result("inequalities", f"product bounds q={q}", product_bounds_violations(q, 20)))

        problems = []
        for n in range(2, n_max + 1):
            spec = make_scheme(SchemeFamily.HERMITIAN, q, n)
            for d in range(2, n + 1, 2):
                problems += size_sandwich_violations(spec, d)
        results.append(_result("inequalities", f"size sandwich q={q}", problems))

        problems = []
        for n in range(1, n_max + 1):
            problems += qbinomial_ratio_violations(n, q)
        results.append(_result("inequalities", f"negative-base q-binomials q={q}", problems))

        problems = []
        for n in range(3, n_max + 1):
            for d in range(2, n, 2):
                problems += hermitian_error_term_violations(q, n, d)
        results.append(_result("inequalities", f"hermitian error terms q={q}", problems))

        problems = []
        for n in range(4, n_max + 1):
            for d in range(2, n, 2):
                problems += hermitian_polar_error_term_violations(q, n, d)
        results.append(_result("inequalities", f"hermitian polar error terms q={q}", problems))
    return results


def check_dn_conjecture(q_values, n_values) -> list[CheckResult]:
    results = []
    for q in q_values:
        for n in n_values:
            if n % 2 == 0:
                continue
            for d in range(1, n + 1, 2):
                report = conjecture_dn_report(q, n, d)
                problems = [] if report.verdict == Verdict.MATCH else [
                    f"solver {report.solver_value} vs conjectured {report.formula_value}"
                ]
                results.append(_result("conjecture-dn", f"polar-d q={q} n={n} d={d}", problems, reported_only=True))
    return results


def hermitian_extension(q_values, n_values=range(4, 8)) -> list[SchemeSpec]:
    """Larger Hermitian forms schemes for the even-d nonnegativity checks."""
    return [make_scheme(SchemeFamily.HERMITIAN, q, n) for q in q_values for n in n_values]


def hamming_extension(q_values=range(2, 8), n_values=range(1, 6)) -> list[SchemeSpec]:
    # certificate_vectors skips the d where q < max{d, n-d+2}
    return [make_scheme(SchemeFamily.HAMMING, q, n) for q in q_values for n in n_values]


def _certificate_specs(specs, q_values, n_values) -> list[SchemeSpec]:
    extra = [s for s in hermitian_extension(q_values, (5,)) if s.n not in n_values]
    extra += [s for s in hamming_extension() if s.q not in q_values or s.n not in n_values]
    return specs + extra


CHECKS = {
    "qbinomial": lambda specs, qs, ns: check_qbinomial(qs, ns),
    "valencies": lambda specs, qs, ns: check_valencies(specs),
    "orthogonality": lambda specs, qs, ns: check_orthogonality(specs),
    "identities": lambda specs, qs, ns: check_identities(specs),
    "qc-inverse": lambda specs, qs, ns: check_qc_inverse(specs),
    "complement-product": lambda specs, qs, ns: check_complement_product(specs),
    "certificates": lambda specs, qs, ns: check_certificates(_certificate_specs(specs, qs, ns)),
    "nonnegativity": lambda specs, qs, ns: check_nonnegativity(
        specs + [s for s in hermitian_extension(qs) if s.n not in ns]
    ),
    "inequalities": lambda specs, qs, ns: check_inequalities(qs, ns),
    "bcd-reduction": lambda specs, qs, ns: check_bcd_reduction(qs, ns),
    "ekr": lambda specs, qs, ns: check_ekr(specs, qs),
    "halfd-multiplicities": lambda specs, qs, ns: check_halfd_multiplicities(specs),
    "conjecture-dn": lambda specs, qs, ns: check_dn_conjecture(qs, ns),
}


def run_checks(names=None, q_values=DEFAULT_Q_VALUES, n_values=DEFAULT_N_VALUES) -> VerifySummary:
    names = list(names) if names else list(CHECKS)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ParameterError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    q_values, n_values = tuple(q_values), tuple(n_values)
    specs = scheme_grid(q_values, n_values)
    summary = VerifySummary()
    for name in names:
        results = CHECKS[name](specs, q_values, n_values)
        failed = [r for r in results if not r.passed and not r.reported_only]
        for r in failed:
            logging.error(f"Check {r.check} failed on {r.case}: {r.detail}")
        logging.info(f"Check {name}: {len(results) - len(failed)}/{len(results)} passed")
        summary.results.extend(results)
    return summary
