"""Antisymmetric matrices of linear forms, Pfaffians and principal minors."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .algebra import LaurentPoly, VarTable

MAX_LEMMA_SIZE = 12


class MatrixError(ValueError):
    pass


class TractabilityError(RuntimeError):
    pass


def entry_name(i: int, j: int) -> str:
    return f"Y{i}{j}" if i < 10 and j < 10 else f"Y{i}_{j}"


def generic_variables(rows: int, cols: int) -> list[str]:
    return [entry_name(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]


@dataclass(frozen=True)
class LinFormMatrix:
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        d = len(self.entries)
        if any(len(row) != d for row in self.entries):
            raise MatrixError("matrix must be square")
        for i in range(d):
            if self.entries[i][i]:
                raise MatrixError("diagonal must vanish")
            for j in range(i + 1, d):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise MatrixError(f"entries ({i},{j}) and ({j},{i}) are not opposite")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def vars(self) -> VarTable:
        return self.entries[0][0].vars

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        return self.entries[ij[0]][ij[1]]

    def swap(self, i: int, j: int) -> "LinFormMatrix":
        """Simultaneously swap rows and columns i and j."""
        perm = list(range(self.size))
        perm[i], perm[j] = perm[j], perm[i]
        return LinFormMatrix(tuple(tuple(self.entries[a][b] for b in perm) for a in perm))

    def to_json_obj(self) -> list:
        return [[e.to_json_obj() for e in row] for row in self.entries]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_rows(cls, rows) -> "LinFormMatrix":
        return cls(tuple(tuple(row) for row in rows))


def symplectic_block(m: int) -> list[list[int]]:
    """J_m: block diagonal with blocks [[0, 1], [-1, 0]]."""
    J = [[0] * (2 * m) for _ in range(2 * m)]
    for i in range(m):
        J[2 * i][2 * i + 1] = 1
        J[2 * i + 1][2 * i] = -1
    return J


def r_matrix_table(m: int, n: int) -> VarTable:
    return VarTable(["Y"] + generic_variables(2 * m, 2 * n))


def build_R(m: int, n: int) -> LinFormMatrix:
    """The 2(m+n) square matrix [[Y J_m, (Y_ij)], [-(Y_ij)^T, 0]]."""
    if n < 1 or m < n:
        raise MatrixError(f"need m >= n >= 1, got m={m}, n={n}")
    table = r_matrix_table(m, n)
    zero = LaurentPoly.zero(table)
    y = LaurentPoly.var(table, "Y")
    d = 2 * (m + n)
    M = [[zero] * d for _ in range(d)]
    J = symplectic_block(m)
    for i in range(2 * m):
        for j in range(2 * m):
            if J[i][j]:
                M[i][j] = y * J[i][j]
        for j in range(2 * n):
            entry = LaurentPoly.var(table, entry_name(i + 1, j + 1))
            M[i][2 * m + j] = entry
            M[2 * m + j][i] = -entry
    return LinFormMatrix.from_rows(M)


def pfaffian(M: LinFormMatrix) -> LaurentPoly:
    """Pfaffian by expansion along the first row, memoized on index sets."""
    d = M.size
    if d % 2:
        raise MatrixError("Pfaffian needs even size")
    table = M.vars

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]) -> LaurentPoly:
        if not idx:
            return LaurentPoly.one(table)
        first, rest = idx[0], idx[1:]
        total = LaurentPoly.zero(table)
        for k, j in enumerate(rest):
            entry = M[first, j]
            if entry.is_zero():
                continue
            term = entry * pf(rest[:k] + rest[k + 1:])
            total = total - term if k % 2 else total + term
        return total

    return pf(tuple(range(d)))


def determinant(rows: list[list[LaurentPoly]]) -> LaurentPoly:
    """Laplace expansion along rows, memoized on the remaining column set."""
    d = len(rows)
    if d == 0:
        raise MatrixError("empty matrix")
    table = rows[0][0].vars

    @lru_cache(maxsize=None)
    def det(r: int, cols: tuple[int, ...]) -> LaurentPoly:
        if r == d:
            return LaurentPoly.one(table)
        total = LaurentPoly.zero(table)
        for k, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            term = entry * det(r + 1, cols[:k] + cols[k + 1:])
            total = total - term if k % 2 else total + term
        return total

    return det(0, tuple(range(d)))


def integer_determinant(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def gram_form_matrix(m: int, n: int) -> LinFormMatrix:
    """(Y_ij)^T J_m (Y_ij), a 2n square antisymmetric matrix of quadratic forms."""
    table = r_matrix_table(m, n)
    Y = [[LaurentPoly.var(table, entry_name(i + 1, j + 1)) for j in range(2 * n)] for i in range(2 * m)]
    J = symplectic_block(m)
    zero = LaurentPoly.zero(table)
    out = [[zero] * (2 * n) for _ in range(2 * n)]
    for a in range(2 * n):
        for b in range(2 * n):
            acc = zero
            for i in range(2 * m):
                for j in range(2 * m):
                    if J[i][j]:
                        acc = acc + Y[i][a] * Y[j][b] * J[i][j]
            out[a][b] = acc
    return LinFormMatrix.from_rows(out)


def lemma21_sides(m: int, n: int) -> tuple[LaurentPoly, LaurentPoly]:
    """(Pf(R(Y)), Y^(m-n) Pf((Y_ij)^T J_m (Y_ij)))."""
    if n < 1 or m < n:
        raise MatrixError(f"need m >= n >= 1, got m={m}, n={n}")
    if 2 * (m + n) > MAX_LEMMA_SIZE:
        raise TractabilityError(f"matrix size {2 * (m + n)} exceeds {MAX_LEMMA_SIZE}")
    lhs = pfaffian(build_R(m, n))
    rhs = LaurentPoly.var(lhs.vars, "Y") ** (m - n) * pfaffian(gram_form_matrix(m, n))
    return lhs, rhs


def check_lemma21(m: int, n: int, strict_sign: bool = False) -> bool:
    """Pf(R(Y)) = (-1)^n Y^(m-n) Pf((Y_ij)^T J_m (Y_ij)).

    With Pf(J) = 1 the Schur complement of the Y J_m block contributes
    Pf(-Y^-1 B^T J B) = (-1)^n Y^-n Pf(B^T J B), hence the sign.  Pass
    ``strict_sign=True`` to demand equality without it.
    """
    lhs, rhs = lemma21_sides(m, n)
    if strict_sign:
        return lhs == rhs
    return lhs == (rhs if n % 2 == 0 else -rhs)


@dataclass(frozen=True)
class MinorSet:
    j: int
    polys: frozenset

    def sorted(self) -> list[LaurentPoly]:
        return sorted(self.polys, key=lambda p: (p.total_degree(), p.to_json()))


def principal_minor_set(M: LinFormMatrix, j: int) -> MinorSet:
    """All principal 2j x 2j minors, duplicates removed; F_0 = {1}."""
    if not 0 <= 2 * j <= M.size:
        raise MatrixError(f"j={j} out of range for size {M.size}")
    if j == 0:
        return MinorSet(0, frozenset({LaurentPoly.one(M.vars)}))
    minors = set()
    for idx in itertools.combinations(range(M.size), 2 * j):
        minors.add(determinant([[M[a, b] for b in idx] for a in idx]))
    return MinorSet(j, frozenset(minors))


def two_by_two_minors(m: int) -> dict[tuple[int, int], LaurentPoly]:
    """m_rs = Y_r1 Y_s2 - Y_r2 Y_s1 of the generic 2m x 2 matrix, 1 <= r < s <= 2m."""
    table = VarTable(generic_variables(2 * m, 2))
    y = lambda i, j: LaurentPoly.var(table, entry_name(i, j))  # noqa: E731
    return {
        (r, s): y(r, 1) * y(s, 2) - y(r, 2) * y(s, 1)
        for r in range(1, 2 * m + 1)
        for s in range(r + 1, 2 * m + 1)
    }


def h_polynomial() -> LaurentPoly:
    """h = m_12 + m_34 for the generic 4 x 2 matrix."""
    minors = two_by_two_minors(2)
    return minors[1, 2] + minors[3, 4]
