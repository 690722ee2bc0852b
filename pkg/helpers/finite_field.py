# helpers/finite_field.py
"""
Small prime fields F_p and their quadratic extensions F_{p^2} as lookup tables.

Elements are integers 0..size-1; in F_{p^2} the integer a0 + a1*p stands for
a0 + a1*x modulo the lexicographically first irreducible monic quadratic.
"""

import itertools
import logging

import numpy as np

from helpers.errors import ParameterError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % k for k in range(2, int(p ** 0.5) + 1))


def first_irreducible_quadratic(p: int) -> tuple[int, int]:
    """(c1, c0) of the first x^2 + c1 x + c0 without a root in F_p."""
    for c1, c0 in itertools.product(range(p), repeat=2):
        if all((x * x + c1 * x + c0) % p for x in range(p)):
            return c1, c0
    raise ParameterError(f"no irreducible quadratic over F_{p}")


class FiniteField:
    def __init__(self, p: int, degree: int = 1):
        if not is_prime(p):
            raise ParameterError(f"the oracle builds fields over a prime q only, got q={p}")
        if degree not in (1, 2):
            raise ParameterError(f"field degree must be 1 or 2, got {degree}")
        self.p = p
        self.degree = degree
        self.size = p ** degree
        self.modulus = first_irreducible_quadratic(p) if degree == 2 else None

        elements = range(self.size)
        self.add = np.array([[self._add(a, b) for b in elements] for a in elements], dtype=np.int64)
        self.mul = np.array([[self._mul(a, b) for b in elements] for a in elements], dtype=np.int64)
        self.neg = np.array([self._neg(a) for a in elements], dtype=np.int64)
        self.sub = self.add[:, self.neg]
        self.frobenius = np.array([self._power(a, p) for a in elements], dtype=np.int64)
        logging.debug(f"Built F_{self.size} tables (modulus {self.modulus})")

    def _digits(self, a):
        return a % self.p, a // self.p

    def _join(self, a0, a1):
        return (a0 % self.p) + (a1 % self.p) * self.p

    def _add(self, a, b):
        a0, a1 = self._digits(a)
        b0, b1 = self._digits(b)
        return self._join(a0 + b0, a1 + b1)

    def _neg(self, a):
        a0, a1 = self._digits(a)
        return self._join(-a0, -a1)

    def _mul(self, a, b):
        a0, a1 = self._digits(a)
        b0, b1 = self._digits(b)
        if self.degree == 1:
            return (a0 * b0) % self.p
        # x^2 = -c1 x - c0
        c1, c0 = self.modulus
        square = a1 * b1
        return self._join(a0 * b0 - square * c0, a0 * b1 + a1 * b0 - square * c1)

    def _power(self, a, e):
        result = 1
        for _ in range(e):
            result = self._mul(result, a)
        return result

    @property
    def prime_subfield(self) -> list[int]:
        """Elements fixed by the Frobenius map, i.e. F_p inside F_{p^2}."""
        return [a for a in range(self.size) if self.frobenius[a] == a]

    def __repr__(self):
        return f"FiniteField(p={self.p}, degree={self.degree})"


def rank_over_field(matrix, field: FiniteField) -> int:
    """Rank by fraction-free elimination: row_r <- a * row_r - f * row_pivot."""
    A = np.array(matrix, dtype=np.int64)
    if A.ndim != 2:
        raise ParameterError(f"expected a matrix, got shape {A.shape}")
    A = A.copy()
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if A[r, c]), None)
        if pivot is None:
            continue
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        a = A[rank, c]
        for r in range(rank + 1, rows):
            f = A[r, c]
            if f:
                A[r] = field.sub[field.mul[a, A[r]], field.mul[f, A[rank]]]
        rank += 1
        if rank == rows:
            break
    return rank
