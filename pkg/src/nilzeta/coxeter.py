"""Hyperoctahedral groups B_n in window notation.

Generators: s0 negates the first window entry, s_i (1 <= i < n) swaps
entries i and i+1 (1-based positions).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .algebra import LaurentPoly, RationalFn, VarTable, parse_poly

MAX_N = 6

X_TABLE = VarTable(["X"])
QT = VarTable(["q", "t"])


class CoxeterError(ValueError):
    pass


@dataclass(frozen=True)
class SignedPermutation:
    window: tuple[int, ...]

    def __post_init__(self):
        n = len(self.window)
        if sorted(abs(x) for x in self.window) != list(range(1, n + 1)):
            raise CoxeterError(f"invalid window {self.window}")

    @property
    def n(self) -> int:
        return len(self.window)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> "SignedPermutation":
        return cls(tuple(-i for i in range(1, n + 1)))

    def times_generator(self, i: int) -> "SignedPermutation":
        """Right multiplication w * s_i, acting on positions."""
        w = list(self.window)
        if i == 0:
            w[0] = -w[0]
        else:
            w[i - 1], w[i] = w[i], w[i - 1]
        return SignedPermutation(tuple(w))

    def has_descent_at(self, i: int) -> bool:
        """Combinatorial test w(i) > w(i+1) with w(0) = 0."""
        ext = (0,) + self.window
        return ext[i] > ext[i + 1]


def length(w: SignedPermutation) -> int:
    """Word length: apply a descending generator until the identity is reached."""
    steps = 0
    while True:
        i = next((i for i in range(w.n) if w.has_descent_at(i)), None)
        if i is None:
            return steps
        w = w.times_generator(i)
        steps += 1


def descents(w: SignedPermutation) -> frozenset[int]:
    """Right descent set {i : l(w s_i) < l(w)}."""
    lw = length(w)
    return frozenset(i for i in range(w.n) if length(w.times_generator(i)) < lw)


def elements(n: int):
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(tuple(s * p for s, p in zip(signs, perm)))


def bfs_lengths(n: int) -> dict[SignedPermutation, int]:
    """Distances from the identity in the Cayley graph; an independent check on `length`."""
    start = SignedPermutation.identity(n)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(n):
            v = w.times_generator(i)
            if v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


@lru_cache(maxsize=None)
def _statistics(n: int) -> tuple[tuple[int, frozenset[int]], ...]:
    if n > MAX_N:
        raise CoxeterError(f"n={n} exceeds enumeration bound {MAX_N}")
    return tuple((length(w), descents(w)) for w in elements(n))


def poincare_polynomial(n: int) -> LaurentPoly:
    X = LaurentPoly.var(X_TABLE, "X")
    total = LaurentPoly.zero(X_TABLE)
    for ell, _ in _statistics(n):
        total = total + X**ell
    return total


def poincare_product(n: int) -> LaurentPoly:
    """prod_{i=1..n} (1 + X + ... + X^(2i-1))."""
    X = LaurentPoly.var(X_TABLE, "X")
    out = LaurentPoly.one(X_TABLE)
    for i in range(1, n + 1):
        out = out * sum((X**k for k in range(2 * i)), LaurentPoly.zero(X_TABLE))
    return out


@dataclass(frozen=True)
class DescentPolynomial:
    n: int
    I: frozenset[int]
    poly: LaurentPoly


def f_poly(n: int, I) -> DescentPolynomial:
    """f_{n,I}(X): sum of X^l(w) over w with D(w) inside I."""
    I = frozenset(I)
    if not I <= set(range(n)):
        raise CoxeterError(f"I={set(I)} is not a subset of {{0..{n - 1}}}")
    X = LaurentPoly.var(X_TABLE, "X")
    total = LaurentPoly.zero(X_TABLE)
    for ell, D in _statistics(n):
        if D <= I:
            total = total + X**ell
    return DescentPolynomial(n, I, total)


def descent_class_sizes(n: int) -> dict[frozenset[int], int]:
    counts: dict[frozenset[int], int] = {}
    for _, D in _statistics(n):
        counts[D] = counts.get(D, 0) + 1
    return counts


def descent_sum(n: int, X: LaurentPoly, Z: list[LaurentPoly]) -> LaurentPoly:
    """sum_w X^l(w) prod_{i in D(w)} Z_i, with X a unit so negative powers are fine."""
    total = LaurentPoly.zero(X.vars)
    for ell, D in _statistics(n):
        term = X**ell
        for i in D:
            term = term * Z[i]
        total = total + term
    return total


def f_expansion(n: int, X: LaurentPoly, Z: list[LaurentPoly]) -> RationalFn:
    """sum_I f_{n,I}(X) prod_{i in I} Z_i / (1 - Z_i)."""
    table = X.vars
    one = RationalFn.const(table, 1)
    total = RationalFn.const(table, 0)
    for k in range(n + 1):
        for I in itertools.combinations(range(n), k):
            weight = f_poly(n, I).poly.substitute({"X": X}, table)
            term = RationalFn(weight)
            for i in I:
                z = RationalFn(Z[i])
                term = term * z / (one - z)
            total = total + term
    return total


def descent_identity_holds(n: int, X: LaurentPoly, Z: list[LaurentPoly]) -> bool:
    """sum_w X^l(w) prod_{D(w)} Z_i / prod_i (1 - Z_i) equals the f-expansion."""
    table = X.vars
    one = LaurentPoly.one(table)
    den = [(one - z, 1) for z in Z]
    lhs = RationalFn.from_factors(descent_sum(n, X, Z), den)
    return lhs.equals(f_expansion(n, X, Z))


EXCEPTIONAL = "q^8t^3-q^7t^2+q^6t^2-q^5t^2-q^3t+q^2t-qt+1"


def exceptional_numerator() -> LaurentPoly:
    return parse_poly(EXCEPTIONAL, QT)


def _minus_inverse_q() -> LaurentPoly:
    return LaurentPoly.monomial(QT, {"q": -1}, -1)


def cox1_data() -> dict:
    Z = [parse_poly("q^4t", QT), parse_poly("q^8t^2", QT)]
    X = _minus_inverse_q()
    B2_sum = descent_sum(2, X, Z)
    return {"Z": Z, "sum": B2_sum, "target": exceptional_numerator()}


def check_cox_identity(which: str) -> bool:
    X = _minus_inverse_q()
    if which == "cox1":
        data = cox1_data()
        if data["sum"] != data["target"]:
            return False
        return descent_identity_holds(2, X, data["Z"])
    if which == "cox2":
        Z = [parse_poly("q^3t", QT)]
        lhs = RationalFn(parse_poly("1-q^2t", QT), parse_poly("1-q^3t", QT))
        if not lhs.equals(f_expansion(1, X, Z)):
            return False
        one = RationalFn.const(QT, 1)
        z = RationalFn(Z[0])
        written = one + (RationalFn(X) + one) * z / (one - z)
        return lhs.equals(written) and descent_identity_holds(1, X, Z)
    raise CoxeterError(f"unknown identity {which!r}")
