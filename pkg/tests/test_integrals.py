from fractions import Fraction

import pytest

from nilzeta.algebra import RationalFn, expand_series, parse_poly, parse_rational
from nilzeta.checks import INTERMEDIATE_LABELS, _computed
from nilzeta.counting import closed_form_value
from nilzeta.integrals import cases, oracle, reference, zeta
from nilzeta.integrals.reference import ABC, QT, NotationError, display, from_q_notation


def R(text):
    return parse_rational(text, QT)


# notation


def test_q_notation():
    assert from_q_notation(r"q^{-5-\tau-2\rho}").equals(parse_rational("a^5 b C", ABC))
    assert from_q_notation("q^{3}(q-1)").equals(parse_rational("a^-4 - a^-3", ABC))


def test_q_notation_rejects_odd_rho():
    with pytest.raises(NotationError):
        from_q_notation(r"q^{-\rho}")


def test_halving_rejects_odd_c():
    with pytest.raises(NotationError):
        reference.halve_c(parse_rational("a c", reference.ABc))


# case decompositions


@pytest.mark.parametrize("label", INTERMEDIATE_LABELS)
def test_intermediate_display(label):
    if label == "ID2.m1n1":
        expected = reference.display_in_terms_of_id1(label, cases.assemble_ID1("m1n1"))
    else:
        expected = display(label)
    assert _computed(label).equals(expected)


@pytest.mark.parametrize("case", cases.CASES)
def test_fixed_point_consistency(case):
    id1 = cases.assemble_ID1(case)
    rhs = sum(
        (c.multiplicity * c.total(id1) for c in cases.id1_cases(case)),
        RationalFn.const(ABC, 0),
    )
    assert rhs.equals(id1)


@pytest.mark.parametrize("case", cases.CASES)
def test_multiplicities_sum_to_domain(case):
    total = sum(cases.multiplicities(case)[k] for k in ("generic", "smooth", "origin"))
    assert total.equals(cases.domain_size(case))
    if case == "m2n1":
        m = cases.multiplicities(case)
        split = m["generic"] + m["v3_minus_v2"] + m["v2_nonzero"] + m["origin"]
        assert split.equals(cases.domain_size(case))


@pytest.mark.parametrize("case", cases.CASES)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_multiplicities_are_counts(case, p):
    for c in cases.id1_cases(case):
        v = c.multiplicity_at(p)
        assert v.denominator == 1 and v >= 0
    assert cases.multiplicities("m1n1")["generic"].evaluate({"a": Fraction(1, p)}) == closed_form_value("gl2", p)


def test_m2n1_multiplicities_match_counts():
    m = cases.multiplicities("m2n1")
    for p in (2, 3):
        v3, v2 = closed_form_value("v3", p), closed_form_value("v2", p)
        at = {"a": Fraction(1, p)}
        assert m["v3_minus_v2"].evaluate(at) == v3 - v2
        assert m["v2_nonzero"].evaluate(at) == v2 - 1


@pytest.mark.parametrize("case", cases.CASES)
def test_zero_C_limit(case):
    # with C = 0 only the generic |x|^tau cells survive
    point = {"a": Fraction(1, 3), "b": Fraction(1, 7), "C": Fraction(0)}
    d = 4 if case == "m1n1" else 8
    generic = cases.multiplicities(case)["generic"] * cases._mono(a=d) * cases.lattice_integral("int_p")
    # for (1,1) the bulk term of I_D2 adds q^-1/(1 - q^-1) I_D1
    expected = generic if case == "m1n1" else generic * cases.MEASURE
    assert cases.assemble_Z(case).evaluate(point) == expected.evaluate(point)


def test_unknown_case():
    with pytest.raises(ValueError):
        cases.assemble_ID1("m3n1")


# local zeta functions


@pytest.mark.parametrize("case", cases.CASES)
def test_local_zeta_matches_published(case):
    z = zeta.local_zeta(case)
    assert z.to_rational().equals(display(f"theorem.{case}"))
    assert z.equals(zeta.published_zeta(case))
    assert z == zeta.published_zeta(case)


def test_latex_forms():
    assert zeta.local_zeta("m1n1").format("latex") == r"\frac{(1-t)(1-q^{2}t)}{(1-q^{3}t)(1-q^{4}t)}"
    text = zeta.local_zeta("m2n1").format("latex")
    assert text.startswith(r"\frac{(1-t)(1-q^{2}t)(1+q^{3}t)(q^{8}t^{3}")
    assert text.endswith(r"{(1-q^{4}t)(1-q^{5}t)(1-q^{5}t^{2})(1-q^{8}t^{2})}")


@pytest.mark.parametrize("case", cases.CASES)
def test_constant_term(case):
    z = zeta.local_zeta(case).to_rational()
    assert z.substitute({"t": parse_poly("0", QT)}).equals(R("1"))


def test_factored_json_round_trip():
    z = zeta.local_zeta("m2n1")
    back = zeta.FactoredZeta.from_json_obj(z.to_json_obj())
    assert back == z and back.to_json() == z.to_json()


def test_from_rational_repeated_factor():
    r = R("(1-t)/((1-q^8t^2)^2 (1-q^3t))")
    z = zeta.FactoredZeta.from_rational(r)
    assert z.equals(r)
    assert (8, 2, -2) in z.factors


def test_from_rational_splits_geometric_factors():
    # (1 + q^4 t) cancels against (1 - q^8 t^2) = (1 - q^4 t)(1 + q^4 t)
    z = zeta.FactoredZeta.from_rational(R("(1+q^4t)/(1-q^8t^2)"))
    assert z.factors == ((4, 1, -1),)


def test_series_matches_expansion():
    z = zeta.local_zeta("m1n1")
    s = expand_series(z.to_rational(), "t", 6).evaluate({"q": 2})
    assert zeta.series_coefficients(z, 2, 6) == s
    assert s[:2] == [1, 19]


@pytest.mark.parametrize("case", cases.CASES)
@pytest.mark.parametrize("q0", [2, 3, 5])
def test_nonnegative_coefficients(case, q0):
    assert zeta.dirichlet_nonnegativity(zeta.local_zeta(case), q0, 8)


def test_abscissae():
    assert zeta.euler_abscissa(zeta.local_zeta("m1n1")) == 5
    assert zeta.euler_abscissa(zeta.local_zeta("m2n1")) == 6
    single = zeta.FactoredZeta(parse_poly("1", QT), ((3, 1, -1),))
    assert zeta.euler_abscissa(single) == 4


def test_constant_denominator_rejected():
    z = zeta.FactoredZeta(parse_poly("1", QT), ((3, 0, -1),))
    with pytest.raises(zeta.NotDirichletFactor):
        zeta.euler_abscissa(z)


def test_beta():
    assert zeta.beta_invariant(reference.exceptional_numerator()) == Fraction(7, 2)
    assert zeta.beta_invariant(parse_poly("1-qt", QT)) == 1
    assert zeta.beta_invariant(parse_poly("1+q^8t^3", QT)) == Fraction(8, 3)
    with pytest.raises(zeta.DomainError):
        zeta.beta_invariant(parse_poly("1+q", QT))
    with pytest.raises(zeta.DomainError):
        zeta.beta_invariant(parse_poly("2+qt", QT))


def test_exceptional_part():
    assert zeta.local_zeta("m2n1").exceptional_part() == reference.exceptional_numerator()
    assert zeta.local_zeta("m1n1").exceptional_part().is_constant()


# residue-enumeration oracle


def test_oracle_lemma23():
    r = oracle.oracle_residue_enum(oracle.TARGETS["lemma23"], 2, 12, {"tau": 2, "rho": 2})
    value = oracle.target_value("lemma23", 2, 2, 2)
    q = Fraction(2)
    assert value == q**-6 * (1 - q**-4) * (1 - 1 / q) / ((1 - q**-6) * (1 - q**-3))
    assert r.contains(value)
    assert r.lower <= r.upper


def test_oracle_igusa():
    r = oracle.oracle_residue_enum(oracle.TARGETS["igusa_det2"], 2, 6, {"tau": 1, "rho": 0})
    value = oracle.target_value("igusa_det2", 2, 1, 0)
    assert value == display("igusa.det2").evaluate({"q": 2, "t": Fraction(1, 2)})
    assert r.contains(value)


def test_oracle_origin_block():
    r = oracle.oracle_residue_enum(oracle.TARGETS["ID1z.origin"], 3, 4, {"tau": 2, "rho": 1})
    assert r.contains(oracle.target_value("ID1z.origin", 3, 2, 1))


@pytest.mark.parametrize("label", ["ID1z.generic", "ID1z.smooth", "J1", "J2", "lemma24"])
def test_oracle_other_blocks(label):
    r = oracle.oracle_residue_enum(oracle.TARGETS[label], 2, 6, {"tau": 1, "rho": 1})
    assert r.contains(oracle.target_value(label, 2, 1, 1))


def test_oracle_intervals_shrink():
    spec = oracle.TARGETS["lemma23"]
    widths = [oracle.oracle_residue_enum(spec, 2, N, {"tau": 1, "rho": 1}).width for N in (4, 8, 12)]
    assert widths[0] > widths[1] > widths[2]


def test_oracle_budget():
    with pytest.raises(oracle.TractabilityError):
        oracle.oracle_residue_enum(oracle.TARGETS["igusa_det2"], 2, 6, {"tau": 1, "rho": 0}, budget=1000)


def test_oracle_rejects_composite():
    with pytest.raises(ValueError):
        oracle.oracle_residue_enum(oracle.TARGETS["lemma23"], 4, 3, {"tau": 1, "rho": 1})


def test_oracle_parallel_deterministic():
    spec = oracle.TARGETS["igusa_det2"]
    a = oracle.oracle_residue_enum(spec, 2, 5, {"tau": 1, "rho": 0}, workers=1)
    b = oracle.oracle_residue_enum(spec, 2, 5, {"tau": 1, "rho": 0}, workers=4)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_integrand_dimension_checked():
    with pytest.raises(ValueError):
        oracle.IntegrandSpec("bad", 3, oracle.TARGETS["lemma23"].groups, oracle.TARGETS["lemma23"].exponent)
