import itertools
import math

import pytest

from nilzeta.algebra import LaurentPoly, VarTable, parse_poly
from nilzeta.coxeter import (
    X_TABLE,
    CoxeterError,
    SignedPermutation,
    bfs_lengths,
    check_cox_identity,
    cox1_data,
    descent_class_sizes,
    descent_identity_holds,
    descents,
    elements,
    f_poly,
    length,
    poincare_polynomial,
    poincare_product,
)


def X(text):
    return parse_poly(text, X_TABLE)


def test_identity_and_longest():
    assert length(SignedPermutation.identity(3)) == 0
    assert descents(SignedPermutation.identity(3)) == frozenset()
    w0 = SignedPermutation.longest(2)
    assert length(w0) == 4
    assert descents(w0) == {0, 1}


def test_invalid_window():
    with pytest.raises(CoxeterError):
        SignedPermutation((1, 1))


def test_b2_poincare():
    assert poincare_polynomial(2) == X("1+2X+2X^2+2X^3+X^4")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_poincare_product(n):
    assert poincare_polynomial(n) == poincare_product(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_group_order(n):
    assert sum(1 for _ in elements(n)) == 2**n * math.factorial(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_greedy_length_is_graph_distance(n):
    dist = bfs_lengths(n)
    assert all(length(w) == d for w, d in dist.items())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_descents_match_inversion_test(n):
    for w in elements(n):
        assert descents(w) == {i for i in range(n) if w.has_descent_at(i)}


def test_f_polys_b2():
    assert f_poly(2, []).poly == X("1")
    assert f_poly(2, [0]).poly == X("1+X+X^2+X^3")
    assert f_poly(2, [1]).poly == X("1+X+X^2+X^3")
    assert f_poly(2, [0, 1]).poly == poincare_polynomial(2)
    assert f_poly(2, [0]).poly.evaluate({"X": 1}) == 4
    assert f_poly(1, [0]).poly == X("1+X")


def test_f_poly_bad_subset():
    with pytest.raises(CoxeterError):
        f_poly(2, [2])
    with pytest.raises(CoxeterError):
        f_poly(7, [])


@pytest.mark.parametrize("n", [2, 3])
def test_descent_classes_partition(n):
    assert sum(descent_class_sizes(n).values()) == 2**n * math.factorial(n)


@pytest.mark.parametrize("n", [2, 3])
def test_f_monotone(n):
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    for I, J in itertools.product(subsets, repeat=2):
        if I <= J:
            diff = f_poly(n, J).poly - f_poly(n, I).poly
            assert all(c > 0 for c in diff.terms.values())


def test_cox_identities():
    assert check_cox_identity("cox1")
    assert check_cox_identity("cox2")
    with pytest.raises(CoxeterError):
        check_cox_identity("cox3")


def test_cox1_sum_value():
    data = cox1_data()
    assert data["sum"] == data["target"]
    at_q1 = data["sum"].substitute({"q": LaurentPoly.one(data["sum"].vars)})
    assert at_q1 == parse_poly("t^3-t^2-t+1", data["sum"].vars)


def test_general_identity_symbolic():
    table = VarTable(["X", "Z0", "Z1", "Z2"])
    Xv = LaurentPoly.var(table, "X")
    Z = [LaurentPoly.var(table, f"Z{i}") for i in range(3)]
    assert descent_identity_holds(3, Xv, Z)
