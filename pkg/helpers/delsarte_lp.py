# helpers/delsarte_lp.py
"""
Delsarte's linear program for codes in an association scheme.

The primal maximizes the size of a D-code over its inner distribution; the dual
is built on its own from the Q-numbers and the multiplicities, so agreement of
the two optima cross-checks the scheme tables.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from helpers.errors import DegenerateCertificateError, ParameterError, VerificationError
from helpers.schemes import multiplicity, p_number, q_number, z_point
from helpers.simplex import solve_exact
from models import DistKind, DistVector, LinearProgram, LPRow, LPStatus, Relation, SchemeSpec, Sense


class PolynomialBound(NamedTuple):
    feasible: bool
    coefficients: DistVector
    objective: Fraction


def _distance_set(spec: SchemeSpec, D) -> frozenset:
    D = frozenset(D)
    bad = sorted(i for i in D if not isinstance(i, int) or i < 1 or i > spec.n)
    if bad:
        raise ParameterError(f"distance set must lie in 1..{spec.n} for {spec.label}, got {bad}")
    return D


def build_primal(spec: SchemeSpec, D) -> LinearProgram:
    D = _distance_set(spec, D)
    n = spec.n
    fixed = {0: Fraction(1)}
    fixed.update({i: Fraction(0) for i in range(1, n + 1) if i not in D})
    rows = [
        LPRow(
            coefficients=[q_number(spec, k, i) for i in range(n + 1)],
            relation=Relation.GE,
            rhs=Fraction(0),
            label=f"dual distribution k={k}",
        )
        for k in range(1, n + 1)
    ]
    return LinearProgram(
        num_vars=n + 1,
        objective=[Fraction(1)] * (n + 1),
        sense=Sense.MAXIMIZE,
        rows=rows,
        nonneg_vars=sorted(D),
        fixed_vars=fixed,
        variable_kind=DistKind.PRIMAL_SOLUTION,
        scheme_label=spec.label,
    )


def build_dual(spec: SchemeSpec, D) -> LinearProgram:
    D = _distance_set(spec, D)
    n = spec.n
    rows = [
        LPRow(
            coefficients=[q_number(spec, k, i) for k in range(n + 1)],
            relation=Relation.LE,
            rhs=Fraction(0),
            label=f"class i={i}",
        )
        for i in sorted(D)
    ]
    return LinearProgram(
        num_vars=n + 1,
        objective=[multiplicity(spec, k) for k in range(n + 1)],
        sense=Sense.MINIMIZE,
        rows=rows,
        nonneg_vars=list(range(1, n + 1)),
        fixed_vars={0: Fraction(1)},
        variable_kind=DistKind.DUAL_SOLUTION,
        scheme_label=spec.label,
    )


@lru_cache(maxsize=None)
def _solve_primal(spec: SchemeSpec, D: frozenset):
    solution = solve_exact(build_primal(spec, D))
    if solution.status != LPStatus.OPTIMAL:
        raise VerificationError(f"Delsarte primal of {spec.label} with D={sorted(D)} came back {solution.status.value}")
    return solution


def lp_opt_set(spec: SchemeSpec, D) -> Fraction:
    D = _distance_set(spec, D)
    value = _solve_primal(spec, D).objective_value
    logging.info(f"LP({sorted(D)}) of {spec.label} = {value}")
    return value


def lp_opt(spec: SchemeSpec, d: int) -> Fraction:
    if d < 1 or d > spec.n:
        raise ParameterError(f"d must lie in 1..{spec.n} for {spec.label}, got d={d}")
    return lp_opt_set(spec, range(d, spec.n + 1))


def lp_opt_solution(spec: SchemeSpec, D):
    """Full optimal primal solution (inner distribution) for a distance set."""
    return _solve_primal(spec, _distance_set(spec, D))


def lp_to_json(lp: LinearProgram) -> dict:
    return lp.model_dump(mode="json")


def lp_from_json(doc: dict) -> LinearProgram:
    lp = LinearProgram.model_validate(doc)
    for index, row in enumerate(lp.rows):
        if len(row.coefficients) != lp.num_vars:
            raise ParameterError(f"row {index} has {len(row.coefficients)} coefficients, expected {lp.num_vars}")
    if len(lp.objective) != lp.num_vars:
        raise ParameterError(f"objective has {len(lp.objective)} coefficients, expected {lp.num_vars}")
    return lp


# Polynomial certificates


def evaluate_polynomial(coefficients, z) -> Fraction:
    value = Fraction(0)
    for a in reversed(coefficients):
        value = value * z + a
    return value


def singleton_polynomial(spec: SchemeSpec, d: int, scale=1) -> list[Fraction]:
    """Coefficients (constant term first) of scale * prod_{i=d}^{n} (z - z_i)."""
    coefficients = [Fraction(scale)]
    for i in range(d, spec.n + 1):
        root = z_point(spec, i)
        shifted = [Fraction(0)] + coefficients
        for j, a in enumerate(coefficients):
            shifted[j] -= root * a
        coefficients = shifted
    return coefficients


def dual_bound_from_values(spec: SchemeSpec, values, D) -> PolynomialBound:
    """F_k = (1/|X|) sum_i F(z_i) P_i(k), normalized by F_0, with the dual feasibility verdict."""
    D = _distance_set(spec, D)
    n = spec.n
    values = [Fraction(v) for v in values]
    if len(values) != n + 1:
        raise ParameterError(f"need {n + 1} values F(z_0..z_n), got {len(values)}")
    size = Fraction(spec.num_vertices)
    raw = [sum((values[i] * p_number(spec, i, k) for i in range(n + 1)), Fraction(0)) / size for k in range(n + 1)]
    if raw[0] == 0:
        raise DegenerateCertificateError(f"degenerate certificate: F_0 = 0 for {spec.label}")
    y = [f / raw[0] for f in raw]
    vector = DistVector(entries=y, kind=DistKind.DUAL_SOLUTION)
    feasible = not is_dual_feasible(spec, D, vector)
    objective = values[0] / raw[0]
    return PolynomialBound(feasible=feasible, coefficients=vector, objective=objective)


def dual_bound_from_polynomial(spec: SchemeSpec, F, D) -> PolynomialBound:
    values = [evaluate_polynomial(F, z_point(spec, i)) for i in range(spec.n + 1)]
    return dual_bound_from_values(spec, values, D)


# Feasibility


def dual_transform(spec: SchemeSpec, entries) -> list[Fraction]:
    """A'_k = sum_i Q_k(i) A_i."""
    n = spec.n
    return [sum((q_number(spec, k, i) * entries[i] for i in range(n + 1)), Fraction(0)) for k in range(n + 1)]


def is_primal_feasible(spec: SchemeSpec, D, x) -> list[str]:
    D = _distance_set(spec, D)
    entries = list(x.entries if isinstance(x, DistVector) else x)
    violations = []
    if len(entries) != spec.n + 1:
        return [f"vector has {len(entries)} entries, expected {spec.n + 1}"]
    if entries[0] != 1:
        violations.append(f"x_0 = {entries[0]} instead of 1")
    for i in range(1, spec.n + 1):
        if i not in D and entries[i] != 0:
            violations.append(f"x_{i} = {entries[i]} but {i} is not in D")
        if entries[i] < 0:
            violations.append(f"x_{i} = {entries[i]} is negative")
    for k, value in enumerate(dual_transform(spec, entries)):
        if k > 0 and value < 0:
            violations.append(f"dual distribution entry {k} = {value} is negative")
    return violations


def is_dual_feasible(spec: SchemeSpec, D, y) -> list[str]:
    D = _distance_set(spec, D)
    entries = list(y.entries if isinstance(y, DistVector) else y)
    n = spec.n
    if len(entries) != n + 1:
        return [f"vector has {len(entries)} entries, expected {n + 1}"]
    violations = []
    if entries[0] != 1:
        violations.append(f"y_0 = {entries[0]} instead of 1")
    for k in range(1, n + 1):
        if entries[k] < 0:
            violations.append(f"y_{k} = {entries[k]} is negative")
    for i in sorted(D):
        value = sum((q_number(spec, k, i) * entries[k] for k in range(n + 1)), Fraction(0))
        if value > 0:
            violations.append(f"class {i}: sum_k Q_k(i) y_k = {value} > 0")
    return violations


def dual_objective(spec: SchemeSpec, y) -> Fraction:
    entries = y.entries if isinstance(y, DistVector) else y
    return sum((multiplicity(spec, k) * entries[k] for k in range(spec.n + 1)), Fraction(0))
