from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilzeta.algebra import RationalFn, parse_rational
from nilzeta.checks import random_points
from nilzeta.integrals.reference import display
from nilzeta.symsum import (
    INTEGRAL_KINDS,
    DivergentSum,
    GeomSumSpec,
    InconsistentConstraints,
    UnsupportedDegree,
    evaluate,
    integral_as_sum,
    lattice_identity_spec,
    make_spec,
    split_min,
    truncated_sum,
)


@pytest.mark.parametrize("which", [1, 2, 3])
def test_basic_identities(which):
    assert evaluate(lattice_identity_spec(which)).equals(display(f"identity{which}"))


def test_geometric_from_zero():
    spec = make_spec("X", "a", powers={"a": "X"}, domains={"X": 0})
    assert evaluate(spec).equals(parse_rational("1/(1-a)", ["a"]))


def test_degree_three_prefactor_rejected():
    with pytest.raises(UnsupportedDegree):
        make_spec("X", "a", powers={"a": "X"}, prefactor={(3,): 1})


def test_cyclic_constraints_rejected():
    spec = make_spec("X Y", "a b", powers={"a": "X", "b": "Y"}, constraints=[("X", "<", "Y"), ("Y", "<", "X")])
    with pytest.raises(InconsistentConstraints):
        evaluate(spec)


def test_second_moment():
    spec = make_spec("X", "a", powers={"a": "X"}, prefactor={(2,): 1})
    assert evaluate(spec).equals(parse_rational("a(1+a)/(1-a)^3", ["a"]))


@pytest.mark.parametrize("kind", ["lemma23", "lemma24", "subcase1", "subcase2", "subcase4", "subcase5"])
def test_integrals_match_displays(kind):
    assert evaluate(integral_as_sum(kind)).equals(display(kind))


def test_subcases_two_and_three_coincide():
    assert evaluate(integral_as_sum("subcase2")).equals(evaluate(integral_as_sum("subcase3")))


def test_subcases_five_and_six_coincide():
    assert evaluate(integral_as_sum("subcase5")).equals(evaluate(integral_as_sum("subcase6")))


def test_subcase_seven_proportional_to_five():
    five = evaluate(integral_as_sum("subcase5"))
    seven = evaluate(integral_as_sum("subcase7"))
    a = parse_rational("a", five.vars)
    assert seven.equals(five * (RationalFn.const(five.vars, 1) - a) / a)


def test_unknown_kind():
    with pytest.raises(ValueError):
        integral_as_sum("subcase9")


def test_truncation_simple():
    partial, tail = truncated_sum(lattice_identity_spec(1), {"a": Fraction(1, 2), "b": 0, "c": 0}, 40)
    assert abs(partial - 2) <= tail


def test_truncation_two_variable_point():
    point = {"a": Fraction(1, 3), "b": Fraction(1, 5), "c": Fraction(1, 2)}
    partial, tail = truncated_sum(lattice_identity_spec(2), point, 30)
    assert abs(display("identity2").evaluate(point) - partial) <= tail


def test_truncation_lemma_point():
    q = Fraction(2)
    point = {"a": 1 / q, "b": q**-2, "C": q**-2}
    partial, tail = truncated_sum(integral_as_sum("lemma23"), point, 40)
    closed = q**-6 * (1 - q**-4) * (1 - 1 / q) / ((1 - q**-6) * (1 - q**-3))
    assert abs(closed - partial) <= tail
    assert evaluate(integral_as_sum("lemma23")).evaluate(point) == closed


def test_divergent_assignment():
    with pytest.raises(DivergentSum):
        truncated_sum(lattice_identity_spec(1), {"a": Fraction(1), "b": 0, "c": 0}, 5)


@pytest.mark.slow
@pytest.mark.parametrize("kind", INTEGRAL_KINDS)
def test_every_integral_agrees_with_truncation(kind):
    spec = integral_as_sum(kind)
    closed = evaluate(spec)
    for point in random_points(spec.symbols, 3, seed=INTEGRAL_KINDS.index(kind)):
        partial, tail = truncated_sum(spec, point, 40)
        assert abs(closed.evaluate(point) - partial) <= tail


def _min_specs():
    specs = [lattice_identity_spec(2), lattice_identity_spec(3)]
    return specs + [integral_as_sum(k) for k in ("lemma23", "lemma24")]


@pytest.mark.parametrize("index", range(4))
def test_split_partition(index):
    spec = _min_specs()[index]
    le, gt = split_min(spec)
    assert (evaluate(le) + evaluate(gt)).equals(evaluate(spec))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_split_regions_disjoint(seed):
    spec = lattice_identity_spec(3)
    le, gt = split_min(spec)
    point = random_points(spec.symbols, 1, seed)[0]
    whole, _ = truncated_sum(spec, point, 12)
    parts = truncated_sum(le, point, 12)[0] + truncated_sum(gt, point, 12)[0]
    assert whole == parts


@pytest.mark.parametrize("kind", ["subcase2", "subcase5"])
def test_split_regions_disjoint_subcases(kind):
    # splitting these before their constraints are resolved leaves the engine's
    # constraint language, so the partition is checked on the box sums only
    spec = integral_as_sum(kind)
    le, gt = split_min(spec)
    point = random_points(spec.symbols, 1, 7)[0]
    whole = truncated_sum(spec, point, 7)[0]
    assert whole == truncated_sum(le, point, 7)[0] + truncated_sum(gt, point, 7)[0]


def test_renaming_invariance():
    spec = lattice_identity_spec(3)
    renamed = spec.rename({"X": "U", "Y": "V", "Z": "W"})
    assert renamed.variables == ("U", "V", "W")
    assert evaluate(renamed).equals(evaluate(spec))


def test_json_round_trip():
    for spec in _min_specs():
        back = GeomSumSpec.from_json(spec.to_json())
        assert back == spec
        assert back.to_json() == spec.to_json()
        assert evaluate(back).equals(evaluate(spec))
