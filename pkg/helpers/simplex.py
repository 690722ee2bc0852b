# helpers/simplex.py
"""Two-phase simplex over exact rationals with Bland's anti-cycling rule."""

import logging
from fractions import Fraction

from helpers.errors import VerificationError
from models import DistVector, LinearProgram, LPSolution, LPStatus, Relation, Sense

ZERO = Fraction(0)


class SimplexTableau:
    """Canonical-form tableau: basic columns of A form an identity, c holds reduced costs."""

    def __init__(self, rows, rhs, basis):
        self.A = [list(row) for row in rows]
        self.b = list(rhs)
        self.basis = list(basis)
        self.c = [ZERO] * (len(self.A[0]) if self.A else 0)
        self.value = ZERO
        self.pivots = 0

    @property
    def m(self):
        return len(self.A)

    @property
    def n(self):
        return len(self.c)

    def set_objective(self, costs):
        """Price out the current basis so that c holds reduced costs of `costs` (maximized)."""
        self.c = list(costs)
        self.value = ZERO
        for i, var in enumerate(self.basis):
            coefficient = self.c[var]
            if coefficient:
                self.c = [cj - coefficient * aij for cj, aij in zip(self.c, self.A[i])]
                self.value += coefficient * self.b[i]

    def pivot(self, i, j):
        piv = self.A[i][j]
        self.A[i] = [a / piv for a in self.A[i]]
        self.b[i] /= piv
        row = self.A[i]
        for k in range(self.m):
            f = self.A[k][j]
            if k != i and f:
                self.A[k] = [a - f * r for a, r in zip(self.A[k], row)]
                self.b[k] -= f * self.b[i]
        f = self.c[j]
        if f:
            self.c = [cl - f * r for cl, r in zip(self.c, row)]
            self.value += f * self.b[i]
        self.basis[i] = j
        self.pivots += 1

    def bland_primal_step(self, allowed):
        try:
            j = min(j for j in allowed if self.c[j] > 0)
        except ValueError:
            return "optimal"
        try:
            _, _, i = min((self.b[i] / self.A[i][j], self.basis[i], i) for i in range(self.m) if self.A[i][j] > 0)
        except ValueError:
            return "unbounded"
        self.pivot(i, j)
        return "go_on"

    def bland_primal(self, allowed):
        while True:
            ret = self.bland_primal_step(allowed)
            if ret in ("optimal", "unbounded"):
                return ret

    def drop_row(self, i):
        del self.A[i]
        del self.b[i]
        del self.basis[i]


def _standard_form(lp: LinearProgram):
    """Substitute fixed variables, split free ones, and add slack columns.

    Returns (rows, rhs, costs, column_map) where column_map[v] lists the
    (column, sign) pairs expressing LP variable v.
    """
    column_map = {}
    columns = 0
    nonneg = set(lp.nonneg_vars)
    for v in range(lp.num_vars):
        if v in lp.fixed_vars:
            continue
        if v in nonneg:
            column_map[v] = [(columns, 1)]
            columns += 1
        else:
            column_map[v] = [(columns, 1), (columns + 1, -1)]
            columns += 2

    inequality_rows = [r for r in lp.rows if r.relation != Relation.EQ]
    total_columns = columns + len(inequality_rows)

    sign = 1 if lp.sense == Sense.MAXIMIZE else -1
    costs = [ZERO] * total_columns
    for v, pairs in column_map.items():
        for col, s in pairs:
            costs[col] = sign * s * lp.objective[v]

    rows, rhs = [], []
    slack = columns
    for row in lp.rows:
        coefficients = [ZERO] * total_columns
        value = row.rhs - sum((row.coefficients[v] * x for v, x in lp.fixed_vars.items()), ZERO)
        for v, pairs in column_map.items():
            for col, s in pairs:
                coefficients[col] = s * row.coefficients[v]
        if row.relation == Relation.LE:
            coefficients[slack] = Fraction(1)
            slack += 1
        elif row.relation == Relation.GE:
            coefficients[slack] = Fraction(-1)
            slack += 1
        if value < 0:
            coefficients = [-a for a in coefficients]
            value = -value
        rows.append(coefficients)
        rhs.append(value)
    return rows, rhs, costs, column_map


def _full_vector(lp: LinearProgram, column_map, column_values):
    values = [ZERO] * lp.num_vars
    for v, x in lp.fixed_vars.items():
        values[v] = x
    for v, pairs in column_map.items():
        values[v] = sum((s * column_values[col] for col, s in pairs), ZERO)
    return values


def _row_holds(coefficients, relation, rhs, values):
    lhs = sum((a * x for a, x in zip(coefficients, values)), ZERO)
    if relation == Relation.LE:
        return lhs <= rhs, lhs == rhs
    if relation == Relation.GE:
        return lhs >= rhs, lhs == rhs
    return lhs == rhs, lhs == rhs


def solve_exact(lp: LinearProgram) -> LPSolution:
    rows, rhs, costs, column_map = _standard_form(lp)
    structural = len(costs)

    if not rows:
        if any(c > 0 for c in costs):
            return LPSolution(status=LPStatus.UNBOUNDED)
        values = _full_vector(lp, column_map, [ZERO] * structural)
        return _optimal(lp, values)

    # phase one: one artificial column per row
    m = len(rows)
    tableau_rows = [row + [Fraction(1) if k == i else ZERO for k in range(m)] for i, row in enumerate(rows)]
    tableau = SimplexTableau(tableau_rows, rhs, basis=range(structural, structural + m))
    tableau.set_objective([ZERO] * structural + [Fraction(-1)] * m)
    tableau.bland_primal(range(structural + m))
    if tableau.value < 0:
        logging.debug(f"LP {lp.scheme_label} is infeasible (phase one value {tableau.value})")
        return LPSolution(status=LPStatus.INFEASIBLE)

    i = 0
    while i < tableau.m:
        if tableau.basis[i] >= structural:
            entering = next((j for j in range(structural) if tableau.A[i][j] != 0), None)
            if entering is None:
                tableau.drop_row(i)
                continue
            tableau.pivot(i, entering)
        i += 1

    tableau.set_objective(costs + [ZERO] * m)
    status = tableau.bland_primal(range(structural))
    logging.debug(f"LP {lp.scheme_label}: {status} after {tableau.pivots} pivots")
    if status == "unbounded":
        return LPSolution(status=LPStatus.UNBOUNDED)

    column_values = [ZERO] * (structural + m)
    for row_index, var in enumerate(tableau.basis):
        column_values[var] = tableau.b[row_index]
    values = _full_vector(lp, column_map, column_values)
    return _optimal(lp, values)


def _optimal(lp: LinearProgram, values) -> LPSolution:
    active = []
    for index, row in enumerate(lp.rows):
        holds, tight = _row_holds(row.coefficients, row.relation, row.rhs, values)
        if not holds:
            raise VerificationError(f"simplex returned a point violating row {index} ({row.label}) of {lp.scheme_label}")
        if tight:
            active.append(index)
    objective = sum((c * x for c, x in zip(lp.objective, values)), ZERO)
    return LPSolution(
        status=LPStatus.OPTIMAL,
        objective_value=objective,
        variable_values=DistVector(entries=values, kind=lp.variable_kind),
        active_constraints=active,
    )
