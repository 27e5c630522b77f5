r"""Closed forms transcribed from published displays.

Most displays are written with powers of q whose exponents are linear in
the integration parameters, e.g. ``q^{-5-\tau-2\rho}``.  They are kept in
that notation and translated to the atomic variables a = q^-1, b = q^-tau,
C = q^-2rho by `from_q_notation`.  Displays in (a, b, c) with c = q^-rho
are translated by halving c-exponents, which must all be even.
"""

from __future__ import annotations

import re
from functools import lru_cache

from ..algebra import LaurentPoly, RationalFn, VarTable, parse_rational

ABC = VarTable(["a", "b", "C"])
ABc = VarTable(["a", "b", "c"])
QT = VarTable(["q", "t"])


class NotationError(ValueError):
    pass


_Q_POWER = re.compile(r"q(?:\^\{([^}]*)\}|\^(-?\d+))?")
_EXP_TERM = re.compile(r"([+-]?)(\d*)(\\tau|\\rho)?")


def _exponent(text: str) -> tuple[int, int, int]:
    """Coefficients (constant, tau, rho) of a linear exponent such as -5-\\tau-2\\rho."""
    const = tau = rho = 0
    pos = 0
    text = text.replace(" ", "")
    while pos < len(text):
        m = _EXP_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise NotationError(f"cannot read exponent {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(3) is None:
            if not m.group(2):
                raise NotationError(f"cannot read exponent {text!r}")
            const += sign * int(m.group(2))
        else:
            k = sign * int(m.group(2) or 1)
            if m.group(3) == "\\tau":
                tau += k
            else:
                rho += k
        pos = m.end()
    return const, tau, rho


def _q_power_as_abc(match: re.Match) -> str:
    if match.group(1) is not None:
        const, tau, rho = _exponent(match.group(1))
    elif match.group(2) is not None:
        const, tau, rho = int(match.group(2)), 0, 0
    else:
        const, tau, rho = 1, 0, 0
    if rho % 2:
        raise NotationError(f"odd rho coefficient in {match.group(0)!r}")
    return f"(a^{{{-const}}}b^{{{-tau}}}C^{{{-rho // 2}}})"


def from_q_notation(text: str) -> RationalFn:
    return parse_rational(_Q_POWER.sub(_q_power_as_abc, text), ABC)


def halve_c(r: RationalFn) -> RationalFn:
    """Rewrite a function of (a, b, c) in (a, b, C) with C = c^2."""

    def convert(p: LaurentPoly) -> LaurentPoly:
        terms = {}
        for (ea, eb, ec), coeff in p.terms.items():
            if ec % 2:
                raise NotationError(f"odd power of c in {p}")
            terms[(ea, eb, ec // 2)] = coeff
        return LaurentPoly._raw(ABC, terms)

    return RationalFn.from_factors(convert(r.num), [(convert(f), m) for f, m in r.factors])


_Z_M1N1_NUM = (
    "a^9b^2c^4+a^8b^2c^4+a^7b^2c^4-a^7bc^4+a^6b^2c^4-2a^6bc^4+a^5b^2c^4-a^5bc^4-a^4bc^4"
    "-a^5bc^2-a^4bc^2+a^4c^2-2a^3bc^2+a^3c^2-a^2bc^2+2a^2c^2+ac^2-a^2+1"
)

_Z_M2N1_NUM = (
    "a^{22}b^4c^{10}+a^{21}b^4c^{10}+a^{20}b^4c^{10}+a^{19}b^4c^{10}+a^{18}b^4c^{10}"
    "+a^{17}b^4c^{10}+a^{16}b^4c^{10}+a^{15}b^4c^{10}+a^{14}b^4c^{10}-2a^{20}b^3c^{10}-a^{19}b^3c^{10}-a^{18}b^3c^{10}"
    "-2a^{17}b^3c^{10}-a^{15}b^3c^{10}-a^{14}b^3c^{10}-a^{13}b^3c^{10}-a^{19}b^3c^8-a^{18}b^3c^8-2a^{17}b^3c^8"
    "-5a^{16}b^3c^8-4a^{15}b^3c^8-4a^{14}b^3c^8-3a^{13}b^3c^8-3a^{12}b^3c^8-a^{11}b^3c^8-a^{10}b^3c^8"
    "-a^9b^3c^8+a^{18}b^2c^8+a^{17}b^2c^8+2a^{16}b^2c^8+5a^{15}b^2c^8+4a^{14}b^2c^8+4a^{13}b^2c^8"
    "+3a^{12}b^2c^8+3a^{11}b^2c^8+a^{10}b^2c^8+a^9b^2c^8+a^8b^2c^8+a^{16}b^3c^6+a^{15}b^3c^6+a^{14}b^3c^6"
    "-a^{12}b^3c^6-a^{11}b^3c^6-a^{10}b^3c^6-a^9b^3c^6-a^{16}b^2c^6+a^{14}b^2c^6+2a^{13}b^2c^6+5a^{12}b^2c^6"
    "+4a^{11}b^2c^6+6a^{10}b^2c^6+4a^9b^2c^6+3a^8b^2c^6+2a^7b^2c^6-2a^{13}bc^6-3a^{12}bc^6"
    "-4a^{11}bc^6-4a^{10}bc^6-5a^9bc^6-3a^8bc^6-2a^7bc^6-2a^6bc^6-a^{13}b^2c^4-2a^{12}b^2c^4"
    "-a^{11}b^2c^4-a^{10}b^2c^4+a^8b^2c^4+3a^7b^2c^4+a^6b^2c^4+a^5b^2c^4+a^4b^2c^4+a^{12}bc^4+2a^{11}bc^4"
    "+a^9bc^4-2a^8bc^4-3a^7bc^4-4a^6bc^4-3a^5bc^4-a^4bc^4-a^3bc^4+a^8c^4+2a^7c^4+2a^6c^4"
    "+2a^5c^4+a^4c^4+a^8bc^2+a^7bc^2+2a^6bc^2-a^5bc^2-a^4bc^2-a^3bc^2-2a^2bc^2-a^7c^2"
    "-a^6c^2-2a^5c^2+a^4c^2+a^3c^2+a^2c^2+2ac^2+a^5-a^4-a+1"
)

_ID1_SOLVED = (
    r"(1-q^{-1})^{2}q^{-%(k)d-\tau}/(1-q^{-%(k1)d-2\tau-4\rho})"
    r"*((%(mult)s)/(1-q^{-1-\tau})"
    r"+q^{-2\rho}(%(mult2)s)(1-q^{-2-\tau})/((1-q^{-2-\tau-2\rho})(1-q^{-1-\tau}))"
    r"+q^{-1-\tau-4\rho}+q^{-2\rho})"
)

# label -> (notation, text); notation is "q" (exponents in tau, rho), "abc", "raw" or "qt".
# "raw" keeps (a, b, c) as independent symbols.
DISPLAYS: dict[str, tuple[str, str]] = {
    "identity1": ("raw", "a/(1-a)^2"),
    "identity2": ("raw", "abc(1-ab)/((1-abc)(1-a)(1-b))"),
    "identity3": ("raw", "ab^2c(1-a+ac-2abc+a^2b^2c)/((1-abc)^2(1-a)(1-b)^2)"),
    "lemma23": ("q", r"q^{-2-\tau-2\rho}(1-q^{-2-\tau})(1-q^{-1})/((1-q^{-2-\tau-2\rho})(1-q^{-1-\tau}))"),
    "lemma24": (
        "q",
        r"q^{-3-\tau-2\rho}(1-q^{-1})(1-q^{-1-\tau}+q^{-1-\tau-2\rho}-2q^{-2-\tau-2\rho}+q^{-4-2\tau-2\rho})"
        r"/((1-q^{-2-\tau-2\rho})^{2}(1-q^{-1-\tau}))",
    ),
    "ID1.case1.m1n1": ("q", r"(1-q^{-1})^{2}q^{-5-\tau}/(1-q^{-1-\tau})"),
    "ID1.case2.m1n1": (
        "q",
        r"q^{-5-\tau-2\rho}(1-q^{-2-\tau})(1-q^{-1})^{2}/((1-q^{-2-\tau-2\rho})(1-q^{-1-\tau}))",
    ),
    "ID1.case1.m2n1": ("q", r"(1-q^{-1})^{2}q^{-9-\tau}/(1-q^{-1-\tau})"),
    "ID1.case2.m2n1": (
        "q",
        r"q^{-9-\tau-2\rho}(1-q^{-2-\tau})(1-q^{-1})^{2}/((1-q^{-2-\tau-2\rho})(1-q^{-1-\tau}))",
    ),
    "ID1.m1n1": ("q", _ID1_SOLVED % {"k": 5, "k1": 6, "mult": "q(q-1)^{2}(q+1)", "mult2": "q^{3}+q^{2}-q-1"}),
    "ID1.m2n1": (
        "q",
        _ID1_SOLVED % {"k": 9, "k1": 10, "mult": "q^{8}-q^{3}(q^{4}+q-1)", "mult2": "q^{3}(q^{4}+q-1)-1"},
    ),
    "J1.m1n1": ("q", r"q^{-5-\tau-2\rho}(1-q^{-1})"),
    "ID2.m1n1": (
        "q",
        r"q^{-1}(1-q^{-6-2\tau-4\rho})I/(1-q^{-1})-q^{-6-\tau-2\rho}(1-q^{-1})(1+q^{-1-\tau-2\rho})",
    ),
    "ID2.case1.m2n1": (
        "q",
        r"q^{-10-\tau-2\rho}(1-q^{-2-\tau})(1-q^{-1})/((1-q^{-2-\tau-2\rho})(1-q^{-1-\tau}))",
    ),
    "ID2.case2.m2n1": (
        "q",
        r"q^{-10-\tau-2\rho}(1-q^{-1})(1-q^{-1-\tau}+q^{-1-\tau-2\rho}-2q^{-2-\tau-2\rho}+q^{-4-2\tau-2\rho})"
        r"/((1-q^{-2-\tau-2\rho})^{2}(1-q^{-1-\tau}))",
    ),
    "subcase1": ("q", r"q^{-5-\tau-4\rho}(1-q^{-1})/(1-q^{-5-\tau-4\rho})"),
    "subcase2": (
        "q",
        r"q^{-7-2\tau-6\rho}(1-q^{-1})^{2}(1-q^{-2-\tau})"
        r"/((1-q^{-5-\tau-4\rho})(1-q^{-2-\tau-2\rho})(1-q^{-1-\tau}))",
    ),
    "subcase4": ("q", r"q^{-6-2\tau-4\rho}(1-q^{-1})^{3}/((1-q^{-1-\tau})(1-q^{-5-\tau-4\rho}))"),
    "subcase5": (
        "q",
        r"q^{-9-2\tau-6\rho}(1-q^{-1})^{2}(1-q^{-1-\tau}+q^{-1-\tau-2\rho}-2q^{-2-\tau-2\rho}+q^{-4-2\tau-2\rho})"
        r"/((1-q^{-5-\tau-4\rho})(1-q^{-2-\tau-2\rho})^{2}(1-q^{-1-\tau}))",
    ),
    "Z.m1n1": ("abc", f"ab(a-1)^2/((1-a^3bc^2)(1-a^2bc^2)(1-ab))*({_Z_M1N1_NUM})"),
    "Z.m2n1": ("abc", f"ab(a-1)^2/((1-a^5bc^4)(1-a^5bc^2)(1-a^2bc^2)^2(1-ab))*({_Z_M2N1_NUM})"),
    "theorem.m1n1": ("qt", "(1-t)(1-q^2t)/((1-q^3t)(1-q^4t))"),
    "theorem.m2n1": (
        "qt",
        "(1-t)(1+q^3t)(1-q^2t)(q^8t^3-q^7t^2+q^6t^2-q^5t^2-q^3t+q^2t-qt+1)"
        "/((1-q^5t)(1-q^5t^2)(1-q^4t)(1-q^8t^2))",
    ),
    "igusa.det2": ("qt", "(1-q^{-2})(1-q^{-1})/((1-q^{-2}t)(1-q^{-1}t))"),
}


@lru_cache(maxsize=None)
def _parsed(label: str, with_unknown: bool) -> RationalFn:
    notation, text = DISPLAYS[label]
    if notation == "qt":
        return parse_rational(text, QT)
    if notation == "abc":
        return halve_c(parse_rational(text, ABc))
    if notation == "raw":
        return parse_rational(text, ABc)
    if with_unknown:
        return parse_rational(_Q_POWER.sub(_q_power_as_abc, text), VarTable(["a", "b", "C", "I"]))
    return from_q_notation(text)


def display(label: str) -> RationalFn:
    """A published closed form as a RationalFn; (a, b, C) unless the display lives in (q, t)."""
    if label not in DISPLAYS:
        raise KeyError(f"unknown display {label!r}; known: {', '.join(sorted(DISPLAYS))}")
    if label == "ID2.m1n1":
        raise ValueError("ID2.m1n1 depends on I_D1; use display_in_terms_of_id1")
    return _parsed(label, False)


def display_in_terms_of_id1(label: str, id1: RationalFn) -> RationalFn:
    """Displays that mention I_D1 (symbol I), with I replaced by a given value."""
    r = _parsed(label, True)
    table = r.vars
    num_parts = r.num.coefficients_in("I")
    if len(num_parts) > 2 or any(f.degree("I") or f.min_degree("I") for f, _ in r.factors):
        raise ValueError(f"{label} is not affine in I_D1")
    names = ["a", "b", "C"]
    drop = {n: LaurentPoly.var(ABC, n) for n in names}
    drop["I"] = LaurentPoly.zero(ABC)

    def part(k: int) -> RationalFn:
        p = num_parts.get(k, LaurentPoly.zero(table))
        return RationalFn.from_factors(p.substitute(drop, ABC), [(f.substitute(drop, ABC), m) for f, m in r.factors])

    return part(0) + part(1) * id1


def exceptional_numerator() -> LaurentPoly:
    from ..coxeter import exceptional_numerator as e

    return e()
