# helpers/oracle.py
"""
Brute-force ground truth for the bilinear, alternating and Hermitian forms schemes.

Vertices are matrices over F_q (F_{q^2} for Hermitian forms) indexed by their
free coordinates in mixed radix, vertex 0 being the zero matrix. All three
schemes are translation invariant, so distance(x, y) is the class of x - y and
only one rank per vertex is ever computed.
"""

import logging
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from helpers.certificates import dual_distribution
from helpers.delsarte_lp import lp_opt
from helpers.errors import CapExceededError, ParameterError, UnsupportedSchemeError, VerificationError
from helpers.finite_field import FiniteField, rank_over_field
from helpers.schemes import make_scheme, p_number, q_number, valency
from models import DistKind, DistVector, Rational, SchemeFamily, SchemeSpec

ORACLE_FAMILIES = frozenset({SchemeFamily.BILINEAR, SchemeFamily.ALTERNATING, SchemeFamily.HERMITIAN})
DEFAULT_VERTEX_CAP = 4096
DEFAULT_EIGEN_CAP = 256


class MatrixSchemeInstance(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec: SchemeSpec
    field: FiniteField
    shape: tuple[int, int]
    coordinates: np.ndarray = Field(description="Free coordinates of every vertex, one row per vertex")
    place: np.ndarray = Field(description="Mixed-radix place values of the coordinates")
    weights: np.ndarray = Field(description="Class of each vertex seen as a difference x - 0")

    @property
    def num_vertices(self) -> int:
        return len(self.coordinates)

    def matrix(self, index: int) -> np.ndarray:
        return _assemble(self.spec.family, self.field, self.shape, self.coordinates[index])

    def distance_row(self, x: int) -> np.ndarray:
        differences = self.field.sub[self.coordinates[x][None, :], self.coordinates]
        return self.weights[differences @ self.place]

    def distance(self, x: int, y: int) -> int:
        difference = self.field.sub[self.coordinates[x], self.coordinates[y]]
        return int(self.weights[difference @ self.place])

    def distance_matrix(self) -> np.ndarray:
        return np.stack([self.distance_row(x) for x in range(self.num_vertices)])


def _upper_pairs(size: int):
    return list(combinations(range(size), 2))


def _assemble(family, field: FiniteField, shape, coordinates) -> np.ndarray:
    rows, cols = shape
    if family == SchemeFamily.BILINEAR:
        return np.asarray(coordinates, dtype=np.int64).reshape(rows, cols)
    matrix = np.zeros(shape, dtype=np.int64)
    if family == SchemeFamily.ALTERNATING:
        for c, (i, j) in zip(coordinates, _upper_pairs(rows)):
            matrix[i, j] = c
            matrix[j, i] = field.neg[c]
        return matrix
    for i in range(rows):
        matrix[i, i] = coordinates[i]
    for c, (i, j) in zip(coordinates[rows:], _upper_pairs(rows)):
        matrix[i, j] = c
        matrix[j, i] = field.frobenius[c]
    return matrix


def _layout(spec: SchemeSpec):
    """(field, matrix shape, radix of every free coordinate)."""
    q = spec.q
    if spec.family == SchemeFamily.BILINEAR:
        return FiniteField(q), (spec.n, spec.m), [q] * (spec.n * spec.m)
    if spec.family == SchemeFamily.ALTERNATING:
        return FiniteField(q), (spec.m, spec.m), [q] * len(_upper_pairs(spec.m))
    if spec.family == SchemeFamily.HERMITIAN:
        n = spec.n
        # diagonal entries lie in F_q, which is encoded as 0..q-1 inside F_{q^2}
        return FiniteField(q, 2), (n, n), [q] * n + [q * q] * len(_upper_pairs(n))
    raise UnsupportedSchemeError(f"the oracle builds bilinear, alternating and hermitian instances only, got {spec.label}")


def build_instance(family, q: int, n: Optional[int] = None, m: Optional[int] = None, cap: int = DEFAULT_VERTEX_CAP) -> MatrixSchemeInstance:
    family = SchemeFamily(family)
    if family not in ORACLE_FAMILIES:
        raise UnsupportedSchemeError(f"the oracle builds bilinear, alternating and hermitian instances only, got {family.value}")
    spec = make_scheme(family, q, n=n, m=m)
    if spec.num_vertices > cap:
        raise CapExceededError(f"{spec.label} has {spec.num_vertices} vertices, above the oracle cap {cap}")
    field, shape, radix = _layout(spec)
    radix = np.array(radix, dtype=np.int64)
    place = np.concatenate(([1], np.cumprod(radix)[:-1])).astype(np.int64)
    indices = np.arange(spec.num_vertices, dtype=np.int64)
    coordinates = (indices[:, None] // place[None, :]) % radix[None, :]

    divisor = 2 if family == SchemeFamily.ALTERNATING else 1
    weights = np.array(
        [rank_over_field(_assemble(family, field, shape, c), field) // divisor for c in coordinates],
        dtype=np.int64,
    )
    logging.info(f"Built oracle instance {spec.label} with {spec.num_vertices} vertices over F_{field.size}")
    return MatrixSchemeInstance(spec=spec, field=field, shape=shape, coordinates=coordinates, place=place, weights=weights)


def empirical_valencies(inst: MatrixSchemeInstance) -> DistVector:
    """Class counts from three base points, which must agree."""
    size = inst.num_vertices
    counts = None
    for base in sorted({0, size // 2, size - 1}):
        row_counts = np.bincount(inst.distance_row(base), minlength=inst.spec.n + 1).tolist()
        if counts is not None and row_counts != counts:
            raise VerificationError(f"{inst.spec.label}: base points disagree on class counts ({counts} vs {row_counts})")
        counts = row_counts
    return DistVector(entries=[Fraction(c) for c in counts], kind=DistKind.INNER)


def empirical_eigenvalues(inst: MatrixSchemeInstance, i: int, cap: int = DEFAULT_EIGEN_CAP) -> list[Fraction]:
    """P_i(k) for k = 0..n, read off D_i E_k and checked on every entry."""
    spec = inst.spec
    if not 0 <= i <= spec.n:
        raise ParameterError(f"class index must lie in 0..{spec.n}, got {i}")
    if inst.num_vertices > cap:
        raise CapExceededError(f"{spec.label} has {inst.num_vertices} vertices, above the eigenvalue cap {cap}")
    distances = inst.distance_matrix()
    adjacency = [(distances == j).astype(np.int64) for j in range(spec.n + 1)]

    eigenvalues = []
    for k in range(spec.n + 1):
        column = [q_number(spec, k, j) for j in range(spec.n + 1)]
        scale = lcm(*(x.denominator for x in column))
        # |X| * scale * E_k, an integer matrix
        idempotent = sum(int(x * scale) * adjacency[j] for j, x in enumerate(column))
        product = adjacency[i] @ idempotent
        if idempotent[0, 0] == 0:
            raise VerificationError(f"{spec.label}: E_{k} has a zero diagonal")
        eigenvalue = Fraction(int(product[0, 0]), int(idempotent[0, 0]))
        if not np.array_equal(product * eigenvalue.denominator, idempotent * eigenvalue.numerator):
            raise VerificationError(f"{spec.label}: D_{i} E_{k} is not {eigenvalue} E_{k}")
        eigenvalues.append(eigenvalue)
    logging.debug(f"Eigenvalues of D_{i} on {spec.label}: {eigenvalues}")
    return eigenvalues


def inner_distribution_of(inst: MatrixSchemeInstance, subset) -> DistVector:
    subset = np.array(sorted(set(int(v) for v in subset)), dtype=np.int64)
    if len(subset) == 0:
        raise ParameterError("inner distribution of an empty subset")
    counts = np.zeros(inst.spec.n + 1, dtype=np.int64)
    for x in subset:
        counts += np.bincount(inst.distance_row(x)[subset], minlength=inst.spec.n + 1)
    return DistVector(entries=[Fraction(int(c), len(subset)) for c in counts], kind=DistKind.INNER)


class SubsetCheckReport(BaseModel):
    scheme_label: str
    trials: int
    min_dual_entry: Optional[Rational] = None
    violations: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def random_subset_dual_check(inst: MatrixSchemeInstance, trials: int = 200, seed: int = 0) -> SubsetCheckReport:
    rng = random.Random(seed)
    size = inst.num_vertices
    violations = []
    smallest = None
    for trial in range(trials):
        subset = rng.sample(range(size), rng.randint(1, size))
        dual = dual_distribution(inst.spec, inner_distribution_of(inst, subset))
        for k, value in enumerate(dual.entries):
            if value < 0:
                violations.append(f"trial {trial}: A'_{k} = {value} < 0 for a subset of size {len(subset)}")
        low = min(dual.entries)
        smallest = low if smallest is None else min(smallest, low)
    report = SubsetCheckReport(scheme_label=inst.spec.label, trials=trials, min_dual_entry=smallest, violations=violations)
    logging.info(f"Random subset dual check on {inst.spec.label}: {trials} trials, {len(violations)} violations")
    return report


# Maximum d-codes


class _Incumbent:
    """Largest clique size found by any branch so far."""

    def __init__(self):
        self.size = 0
        self._lock = threading.Lock()

    def offer(self, size: int):
        with self._lock:
            if size > self.size:
                self.size = size


def _color_bound(graph: nx.Graph, nodes) -> int:
    coloring = nx.greedy_color(graph.subgraph(nodes), strategy="largest_first")
    return max(coloring.values()) + 1 if coloring else 0


def _search_branch(graph, order, index, incumbent, deadline, target, tie_break) -> list:
    root = order[index]
    best = [root]
    incumbent.offer(1)

    def expand(clique, candidates):
        nonlocal best
        if deadline is not None and time.monotonic() > deadline:
            raise CapExceededError("clique search exceeded its time budget")
        if len(clique) > len(best):
            best = list(clique)
            incumbent.offer(len(best))
        if not candidates or (target is not None and incumbent.size >= target):
            return
        ceiling = len(clique) + _color_bound(graph, candidates)
        if ceiling <= len(best) or ceiling + tie_break <= incumbent.size:
            return
        for position, v in enumerate(candidates):
            if len(clique) + len(candidates) - position <= len(best):
                return
            expand(clique + [v], [u for u in candidates[position + 1:] if u in graph.adj[v]])

    adjacent = graph.adj[root]
    expand([root], [v for v in order[index + 1:] if v in adjacent])
    return best


def code_graph(inst: MatrixSchemeInstance, d: int) -> nx.Graph:
    """Vertices at distance >= d from 0, joined when their distance is >= d."""
    far = np.flatnonzero(inst.distance_row(0) >= d)
    graph = nx.Graph()
    graph.add_nodes_from(int(v) for v in far)
    for u in far:
        neighbours = far[inst.distance_row(int(u))[far] >= d]
        graph.add_edges_from((int(u), int(v)) for v in neighbours if v > u)
    return graph


def max_code_bruteforce(
    inst: MatrixSchemeInstance,
    d: int,
    time_budget: Optional[float] = None,
    workers: int = 1,
    target: Optional[int] = None,
):
    """Exact maximum d-code as (size, sorted vertex indices).

    Translation invariance lets every code contain the zero matrix. With
    `target` set (typically the LP bound) the search stops once a code of that
    size is found.
    """
    n = inst.spec.n
    if not isinstance(d, int) or d < 1 or d > n:
        raise ParameterError(f"d must lie in 1..{n} for {inst.spec.label}, got d={d}")
    if d == 1:
        return inst.num_vertices, list(range(inst.num_vertices))

    graph = code_graph(inst, d)
    order = sorted(graph.nodes, key=lambda v: (-graph.degree[v], v))
    deadline = time.monotonic() + time_budget if time_budget else None
    incumbent = _Incumbent()
    inner_target = target - 1 if target else None
    tie_break = 1 if workers > 1 else 0

    def branch(index):
        return _search_branch(graph, order, index, incumbent, deadline, inner_target, tie_break)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(branch, range(len(order))))
    else:
        results = [branch(index) for index in range(len(order))]
    best = max(results, key=len, default=[])
    witness = sorted([0] + [int(v) for v in best])
    logging.info(f"Maximum {d}-code in {inst.spec.label} has {len(witness)} elements")
    return len(witness), witness


def witness_to_json(inst: MatrixSchemeInstance, witness) -> dict:
    spec = inst.spec
    return {
        "family": spec.family.value,
        "q": spec.q,
        "n": spec.n,
        "m": spec.m,
        "field_size": inst.field.size,
        "field_modulus": list(inst.field.modulus) if inst.field.modulus else None,
        "shape": list(inst.shape),
        "vertices": [inst.matrix(v).flatten().tolist() for v in witness],
    }


# Empirical versus formula comparison


class OracleReport(BaseModel):
    family: str
    q: int
    n: int
    m: Optional[int] = None
    d: int
    num_vertices: int
    formula_valencies: list[Rational]
    empirical_valencies: list[Rational]
    valencies_match: bool
    eigenvalues_checked: bool = False
    eigenvalue_mismatches: list[str] = Field(default_factory=list)
    lp_bound: Rational
    max_code: Optional[int] = None
    max_code_note: Optional[str] = None
    subset_trials: int = 0
    subset_violations: list[str] = Field(default_factory=list)
    witness: Optional[dict] = None

    @property
    def consistent(self) -> bool:
        within = self.max_code is None or self.max_code <= self.lp_bound
        return self.valencies_match and not self.eigenvalue_mismatches and within and not self.subset_violations


def compare_with_formulas(
    inst: MatrixSchemeInstance,
    d: int,
    eigen_cap: int = DEFAULT_EIGEN_CAP,
    time_budget: Optional[float] = None,
    workers: int = 1,
    trials: int = 200,
    seed: int = 0,
    keep_witness: bool = False,
) -> OracleReport:
    """Valencies, eigenvalues, maximum d-code and random subsets against the closed forms.

    A clique search that runs out of time leaves `max_code` empty with a note
    instead of failing the whole comparison.
    """
    spec = inst.spec
    formula = [valency(spec, i) for i in range(spec.n + 1)]
    empirical = empirical_valencies(inst).entries

    mismatches = []
    checked = inst.num_vertices <= eigen_cap
    if checked:
        for i in range(1, spec.n + 1):
            try:
                observed = empirical_eigenvalues(inst, i, cap=eigen_cap)
            except VerificationError as e:
                mismatches.append(str(e))
                continue
            for k, value in enumerate(observed):
                expected = p_number(spec, i, k)
                if value != expected:
                    mismatches.append(f"P_{i}({k}) is {value} empirically, {expected} by formula")
    else:
        logging.info(f"Skipping eigenvalues of {spec.label}: {inst.num_vertices} vertices above {eigen_cap}")

    bound = lp_opt(spec, d)
    size, witness, note = None, None, None
    try:
        size, witness = max_code_bruteforce(inst, d, time_budget=time_budget, workers=workers, target=int(bound))
    except CapExceededError as e:
        note = str(e)
        logging.warning(f"Clique search on {spec.label} stopped: {note}")

    subsets = random_subset_dual_check(inst, trials=trials, seed=seed)
    return OracleReport(
        family=spec.family.value,
        q=spec.q,
        n=spec.n,
        m=spec.m,
        d=d,
        num_vertices=inst.num_vertices,
        formula_valencies=formula,
        empirical_valencies=empirical,
        valencies_match=list(empirical) == formula,
        eigenvalues_checked=checked,
        eigenvalue_mismatches=mismatches,
        lp_bound=bound,
        max_code=size,
        max_code_note=note,
        subset_trials=trials,
        subset_violations=subsets.violations,
        witness=witness_to_json(inst, witness) if keep_witness and witness else None,
    )
