import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilzeta.algebra import LaurentPoly, VarTable, parse_poly
from nilzeta.matforms import (
    LinFormMatrix,
    MatrixError,
    TractabilityError,
    build_R,
    check_lemma21,
    determinant,
    h_polynomial,
    integer_determinant,
    pfaffian,
    principal_minor_set,
    r_matrix_table,
    two_by_two_minors,
)


def _int_matrix(rows, table):
    return LinFormMatrix.from_rows([[LaurentPoly.const(table, x) for x in row] for row in rows])


def _random_antisymmetric(d, rng):
    M = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            M[i][j] = rng.randint(-9, 9)
            M[j][i] = -M[i][j]
    return M


def test_two_by_two():
    table = VarTable(["y"])
    y = LaurentPoly.var(table, "y")
    M = LinFormMatrix.from_rows([[LaurentPoly.zero(table), y], [-y, LaurentPoly.zero(table)]])
    assert pfaffian(M) == y


def test_shapes():
    assert build_R(1, 1).size == 4
    assert build_R(2, 1).size == 6
    with pytest.raises(MatrixError):
        build_R(1, 2)


def test_pfaffian_m1n1_up_to_sign():
    table = r_matrix_table(1, 1)
    f = parse_poly("Y11 Y22 - Y12 Y21", table)
    assert pfaffian(build_R(1, 1)) in (f, -f)


def test_pfaffian_m2n1_up_to_sign():
    table = r_matrix_table(2, 1)
    f = parse_poly("Y (Y11 Y22 - Y12 Y21 + Y31 Y42 - Y32 Y41)", table)
    assert pfaffian(build_R(2, 1)) in (f, -f)


def test_odd_size_rejected():
    table = VarTable(["y"])
    z = LaurentPoly.zero(table)
    with pytest.raises(MatrixError):
        pfaffian(LinFormMatrix.from_rows([[z] * 3] * 3))


def test_non_antisymmetric_rejected():
    table = VarTable(["y"])
    one, z = LaurentPoly.one(table), LaurentPoly.zero(table)
    with pytest.raises(MatrixError):
        LinFormMatrix.from_rows([[z, one], [one, z]])


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1)])
def test_lemma21(m, n):
    assert check_lemma21(m, n)


def test_lemma21_literal_sign_holds_for_even_n_only():
    assert check_lemma21(2, 2, strict_sign=True)
    assert not check_lemma21(2, 1, strict_sign=True)


def test_lemma21_tractability():
    with pytest.raises(TractabilityError):
        check_lemma21(4, 3)


def test_minor_set_m1n1():
    table = r_matrix_table(1, 1)
    got = principal_minor_set(build_R(1, 1), 1).polys
    want = {LaurentPoly.zero(table)} | {parse_poly(f"{v}^2", table) for v in ("Y", "Y11", "Y12", "Y21", "Y22")}
    assert got == want


def test_minor_set_top_m2n1():
    table = r_matrix_table(2, 1)
    h = parse_poly("Y11 Y22 - Y12 Y21 + Y31 Y42 - Y32 Y41", table)
    Y = LaurentPoly.var(table, "Y")
    assert principal_minor_set(build_R(2, 1), 3).polys == {Y**2 * h**2}


def test_minor_set_middle_m2n1():
    table = r_matrix_table(2, 1)
    Y = LaurentPoly.var(table, "Y")
    want = {Y**4}
    want |= {Y**2 * LaurentPoly.var(table, f"Y{i}{j}") ** 2 for i in range(1, 5) for j in (1, 2)}
    sub = {"Y" + k[1:]: LaurentPoly.var(table, k) for k in table.names if k != "Y"}
    want |= {m.substitute(sub, table) ** 2 for m in two_by_two_minors(2).values()}
    got = principal_minor_set(build_R(2, 1), 2).polys
    assert want <= got
    # remaining minors vanish identically
    assert got - want <= {LaurentPoly.zero(table)}


def test_minor_set_zero():
    assert principal_minor_set(build_R(1, 1), 0).polys == {LaurentPoly.one(r_matrix_table(1, 1))}


def test_two_by_two_minors():
    minors = two_by_two_minors(2)
    table = minors[1, 2].vars
    assert minors[1, 2] == parse_poly("Y11 Y22 - Y12 Y21", table)
    assert h_polynomial() == minors[1, 2] + minors[3, 4]
    single = two_by_two_minors(1)
    assert list(single) == [(1, 2)]


def test_matrix_json_shape():
    M = build_R(1, 1)
    obj = M.to_json_obj()
    assert len(obj) == 4 and all(len(row) == 4 for row in obj)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 4, 6]), st.integers(0, 10**6))
def test_pfaffian_squared_is_determinant(d, seed):
    rows = _random_antisymmetric(d, random.Random(seed))
    table = VarTable(["x"])
    pf = pfaffian(_int_matrix(rows, table)).constant_value()
    assert pf * pf == integer_determinant(rows)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(0, 1), (0, 2), (1, 3), (2, 3)]))
def test_swap_negates(seed, ij):
    table = VarTable(["x"])
    M = _int_matrix(_random_antisymmetric(4, random.Random(seed)), table)
    assert pfaffian(M.swap(*ij)) == -pfaffian(M)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_principal_minors_are_squares(seed):
    rng = random.Random(seed)
    M = build_R(2, 1)
    point = {name: rng.randint(-5, 5) for name in M.vars.names}
    for j in (1, 2, 3):
        for p in principal_minor_set(M, j).polys:
            v = p.evaluate(point)
            assert v.denominator == 1 and v >= 0 and math.isqrt(int(v)) ** 2 == v


def test_symbolic_determinant_matches_integer():
    rows = [[2, -1, 0], [1, 3, 4], [0, 5, -2]]
    table = VarTable(["x"])
    poly_rows = [[LaurentPoly.const(table, x) for x in r] for r in rows]
    assert determinant(poly_rows).constant_value() == integer_determinant(rows)
