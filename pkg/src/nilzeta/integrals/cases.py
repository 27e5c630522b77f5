"""Case decompositions of the integrals I_D1, I_D2 and their assembly into Z(rho, tau).

Everything lives over the atomic variables a = q^-1, b = q^-tau and
C = q^-2rho.  Integrals of the shape handled by the lattice-sum engine are
produced by it; the remaining pieces are elementary measures of shells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..algebra import LaurentPoly, RationalFn
from ..symsum import evaluate, integral_as_sum
from .reference import ABC, from_q_notation

CASES = ("m1n1", "m2n1")


class AssemblyError(ArithmeticError):
    pass


def _r(text: str) -> RationalFn:
    return from_q_notation(text)


def _mono(a: int = 0, b: int = 0, C: int = 0) -> RationalFn:
    return RationalFn(LaurentPoly.monomial(ABC, {"a": a, "b": b, "C": C}))


ONE = RationalFn.const(ABC, 1)
ZERO = RationalFn.const(ABC, 0)
A = _mono(a=1)
MEASURE = ONE - A  # 1 - q^-1


@dataclass(eq=False)
class CaseFormula:
    """One case of a decomposition: value + recursion * I_D1, counted `multiplicity` times."""

    label: str
    value: RationalFn
    multiplicity: RationalFn = field(default_factory=lambda: ONE)
    recursion: RationalFn = field(default_factory=lambda: ZERO)

    def total(self, id1: RationalFn) -> RationalFn:
        return self.value + self.recursion * id1

    def multiplicity_at(self, p: int) -> Fraction:
        return self.multiplicity.evaluate({"a": Fraction(1, p), "b": 1, "C": 1})


@lru_cache(maxsize=None)
def lattice_integral(kind: str) -> RationalFn:
    return evaluate(integral_as_sum(kind))


def _check_case(case: str) -> None:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


@lru_cache(maxsize=None)
def multiplicities(case: str) -> dict[str, RationalFn]:
    """Residue counts as functions of a = 1/q."""
    _check_case(case)
    if case == "m1n1":
        gl2 = _r("q(q-1)^{2}(q+1)")
        return {"generic": gl2, "smooth": _r("q^{4}-1") - gl2, "origin": ONE}
    v3 = _r("q^{3}(q^{4}+q-1)")
    v2 = _r("(q+1)(q^{4}-1)+1")
    return {
        "generic": _r("q^{8}") - v3,
        "smooth": v3 - ONE,
        "origin": ONE,
        "v3_minus_v2": v3 - v2,
        "v2_nonzero": v2 - ONE,
    }


def domain_size(case: str) -> RationalFn:
    return _r("q^{4}") if case == "m1n1" else _r("q^{8}")


def id1_cases(case: str) -> list[CaseFormula]:
    """Generic, smooth and origin residue classes z of the I_D1 sum."""
    _check_case(case)
    d = 4 if case == "m1n1" else 8
    mult = multiplicities(case)
    generic = MEASURE * _mono(a=d) * lattice_integral("int_p")
    smooth = MEASURE * _mono(a=d - 1) * lattice_integral("lemma23")
    # Rescaling y = pi y' and then x = pi^2 x' reproduces I_D1 itself.
    scale = _mono(a=d + 2, b=2, C=2)
    origin_value = MEASURE * scale * MEASURE + MEASURE * MEASURE * _mono(a=d + 1, b=1, C=1)
    return [
        CaseFormula(f"ID1.case1.{case}", generic, mult["generic"]),
        CaseFormula(f"ID1.case2.{case}", smooth, mult["smooth"]),
        CaseFormula(f"ID1.case3.{case}", origin_value, mult["origin"], recursion=scale),
    ]


def solve_fixed_point(cases: list[CaseFormula]) -> RationalFn:
    """Solve I = alpha I + beta for the weighted sum of cases."""
    alpha = ZERO
    beta = ZERO
    for c in cases:
        alpha = alpha + c.multiplicity * c.recursion
        beta = beta + c.multiplicity * c.value
    denom = ONE - alpha
    if denom.is_zero():
        raise AssemblyError("degenerate fixed point: alpha = 1")
    return (beta / denom).cancel()


@lru_cache(maxsize=None)
def assemble_ID1(case: str) -> RationalFn:
    return solve_fixed_point(id1_cases(case))


def j_integrals() -> tuple[CaseFormula, CaseFormula]:
    """J1 over (p - p^2) x p^4 and J2 over p^2 x p^4, with J2 recursive in I_D1."""
    j1 = CaseFormula("J1.m1n1", _mono(a=4) * MEASURE * _mono(a=1, b=1, C=1))
    scale = _mono(a=6, b=2, C=2)
    j2 = CaseFormula("J2.m1n1", scale * MEASURE, recursion=scale / MEASURE)
    return j1, j2


@lru_cache(maxsize=None)
def subcase_integrals() -> dict[int, RationalFn]:
    return {i: lattice_integral(f"subcase{i}") for i in range(1, 8)}


def id2_cases(case: str) -> list[CaseFormula]:
    _check_case(case)
    if case == "m1n1":
        j1, j2 = j_integrals()
        # I_D2 = q^-1/(1-q^-1) I_D1 - q^-1 (J1 + J2)
        bulk = CaseFormula("ID2.bulk.m1n1", ZERO, recursion=A / MEASURE)
        return [
            bulk,
            CaseFormula(j1.label, j1.value, -A, j1.recursion),
            CaseFormula(j2.label, j2.value, -A, j2.recursion),
        ]
    mult = multiplicities(case)
    sub = subcase_integrals()
    third = _mono(a=5) * sum((sub[i] for i in range(2, 8)), sub[1])
    return [
        CaseFormula("ID2.case1.m2n1", _mono(a=8) * lattice_integral("lemma23"), mult["generic"]),
        CaseFormula("ID2.case2.m2n1", _mono(a=7) * lattice_integral("lemma24"), mult["v3_minus_v2"]),
        CaseFormula("ID2.case3.m2n1", third, mult["v2_nonzero"]),
    ]


@lru_cache(maxsize=None)
def assemble_ID2(case: str) -> RationalFn:
    id1 = assemble_ID1(case)
    total = ZERO
    for c in id2_cases(case):
        total = total + c.multiplicity * c.total(id1)
    return total.cancel()


@lru_cache(maxsize=None)
def assemble_Z(case: str) -> RationalFn:
    return (assemble_ID1(case) + assemble_ID2(case)).cancel()


def id1_case_value(label: str) -> RationalFn:
    """Value of one I_D1 case with the solved I_D1 substituted."""
    case = label.rsplit(".", 1)[-1]
    for c in id1_cases(case):
        if c.label == label:
            return c.total(assemble_ID1(case))
    raise KeyError(label)
