"""Topological zeta functions and continuation data of Euler factors.

The topological zeta function is the leading term of the q -> 1
expansion: with q = e^u and t = q^-s each monomial q^a t^b becomes
exp((a - b s) u), and the ratio of the lowest nonvanishing u-coefficients
of numerator and denominator is a rational function of s.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import LaurentPoly, RationalFn, VarTable
from .integrals.zeta import (
    FactoredZeta,
    beta_invariant,
    binomial,
    local_zeta,
    pole_abscissas,
)

S = VarTable(["s"])


class DegreeMismatch(ArithmeticError):
    def __init__(self, num_order: int, den_order: int):
        super().__init__(f"leading u-orders differ: numerator {num_order}, denominator {den_order}")
        self.num_order = num_order
        self.den_order = den_order


class TruncationError(ArithmeticError):
    pass


def _s_linear(a: int, b: int) -> LaurentPoly:
    """a - b s."""
    return LaurentPoly.const(S, a) + LaurentPoly.monomial(S, {"s": 1}, -b)


class SVariableRational:
    """num/den in one variable s; equality by cross-multiplication."""

    __slots__ = ("num", "den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.vars != S or den.vars != S:
            raise ValueError("expected polynomials in s")
        # cancel integer content and make the leading denominator coefficient positive
        g = math.gcd(*num.terms.values(), *den.terms.values())
        if den.terms[max(den.terms)] < 0:
            g = -g
        # and strip the common power of s so both sides are honest polynomials
        shift = min(e[0] for e in (*num.terms, *den.terms))
        self.num = LaurentPoly(S, {(e[0] - shift,): c // g for e, c in num.terms.items()})
        self.den = LaurentPoly(S, {(e[0] - shift,): c // g for e, c in den.terms.items()})

    @classmethod
    def parse(cls, text: str) -> "SVariableRational":
        from .algebra import parse_rational

        r = parse_rational(text, S)
        return cls(r.num, r.den)

    def __mul__(self, other: "SVariableRational") -> "SVariableRational":
        return SVariableRational(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "SVariableRational") -> "SVariableRational":
        return SVariableRational(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SVariableRational):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def evaluate(self, s: Fraction | int) -> Fraction:
        return self.num.evaluate({"s": s}) / self.den.evaluate({"s": s})

    def as_rational(self) -> RationalFn:
        return RationalFn(self.num, self.den)

    def format(self, style: str = "text") -> str:
        if self.num.is_zero():
            return "0"
        num, den = _display_factors(self.num, style), _display_factors(self.den, style)
        if style == "latex":
            return num if den == "1" else f"\\frac{{{num}}}{{{den}}}"
        if den == "1":
            return num
        single_group = den.count("(") == 1 and den.startswith("(") and re.fullmatch(r"\([^()]*\)(\^\d+)?", den)
        atomic = bool(single_group) or ("*" not in den and " " not in den)
        return f"{num}/{den}" if atomic else f"{num}/({den})"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"SVariableRational({self.format()!r})"


def _coefficients(p: LaurentPoly) -> tuple[int, list[Fraction]]:
    """(lowest exponent, ascending coefficient list) of a univariate p."""
    exps = {e[0]: Fraction(c) for e, c in p.terms.items()}
    low, high = min(exps), max(exps)
    return low, [exps.get(k, Fraction(0)) for k in range(low, high + 1)]


def _deflate(coeffs: list[Fraction], r: Fraction) -> list[Fraction] | None:
    """Quotient of the polynomial by (s - r), or None if r is not a root."""
    if len(coeffs) < 2:
        return None
    out = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + carry * r
        out[k - 1] = carry
    return out if coeffs[0] + carry * r == 0 else None


def _candidate_roots(coeffs: list[Fraction]) -> list[Fraction]:
    scale = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * scale) for c in coeffs]
    divisors = lambda n: [d for d in range(1, abs(n) + 1) if n % d == 0]  # noqa: E731
    out = set()
    for num in divisors(ints[0]):
        for den in divisors(ints[-1]):
            out.update((Fraction(num, den), Fraction(-num, den)))
    return sorted(out)


def _display_factors(p: LaurentPoly, style: str) -> str:
    """Write p as content * s^k * prod (linear factors) * remainder, for display."""
    if p.is_zero() or p.is_constant():
        return p.format(style)
    low, coeffs = _coefficients(p)
    power = lambda body, k: body if k == 1 else (  # noqa: E731
        f"{body}^{k}" if style == "text" else f"{body}^{{{k}}}")
    pieces = [power("s", low)] if low else []
    for r in _candidate_roots(coeffs) if coeffs[0] else []:
        k = 0
        while (quo := _deflate(coeffs, r)) is not None:
            coeffs, k = quo, k + 1
        if k:
            lin = LaurentPoly.monomial(S, {"s": 1}, r.denominator) - LaurentPoly.const(S, r.numerator)
            coeffs = [c / r.denominator**k for c in coeffs]
            pieces.append(power(f"({lin.format(style)})", k))
    content = Fraction(math.gcd(*(c.numerator for c in coeffs)), math.lcm(*(c.denominator for c in coeffs)))
    if coeffs[-1] < 0:
        content = -content
    if len(coeffs) > 1:
        rest = sum(
            (LaurentPoly.monomial(S, {"s": k}, c / content) for k, c in enumerate(coeffs) if c),
            LaurentPoly.zero(S),
        )
        pieces.append(f"({rest.format(style)})")
    sep = "*" if style == "text" else ""
    if content == -1:
        return "-" + sep.join(pieces)
    if content != 1:
        pieces.insert(0, str(content))
    return sep.join(pieces)


def _expanded(z: FactoredZeta) -> tuple[LaurentPoly, LaurentPoly]:
    num = z.numerator * z.scalar.numerator
    den = LaurentPoly.const(num.vars, z.scalar.denominator)
    for a, b, m in z.factors:
        if m > 0:
            num = num * binomial(a, b) ** m
        else:
            den = den * binomial(a, b) ** (-m)
    return num, den


def _u_series(p: LaurentPoly):
    powers = [(_s_linear(a, b), c, LaurentPoly.const(S, c)) for (a, b), c in p.terms.items()]
    while True:
        yield sum((acc for _, _, acc in powers), LaurentPoly.zero(S))
        powers = [(lin, c, acc * lin) for lin, c, acc in powers]


def u_coefficients(p: LaurentPoly, K: int) -> list[LaurentPoly]:
    """k! times the u^k coefficient of p(e^u, e^(-s u)), for k = 0..K."""
    series = _u_series(p)
    return [next(series) for _ in range(K + 1)]


def _leading(p: LaurentPoly, K: int) -> tuple[int, LaurentPoly]:
    for k, c in zip(range(K + 1), _u_series(p)):
        if not c.is_zero():
            return k, c
    raise TruncationError(f"no nonzero u-coefficient up to order {K}")


def default_order(z: FactoredZeta) -> int:
    """Monomials of the larger expanded side, plus headroom of 2.

    A sum of n monomials with distinct exponents has u-order below n, so
    this always reaches both leading coefficients.
    """
    return max(len(p.terms) for p in _expanded(z)) + 2


def topological_zeta(z: FactoredZeta, K: int | None = None, strict: bool = True) -> SVariableRational:
    """Ratio of the leading u-coefficients of numerator and denominator.

    With ``strict=False`` unequal leading orders are allowed and the ratio
    of the two leading coefficients is returned; this is how contributions
    of individual factors are read off.
    """
    K = default_order(z) if K is None else K
    num, den = _expanded(z)
    kn, cn = _leading(num, K)
    kd, cd = _leading(den, K)
    if strict and kn != kd:
        raise DegreeMismatch(kn, kd)
    # coefficients above carry k!; undo that before dividing
    return SVariableRational(cn * math.factorial(kd), cd * math.factorial(kn))


def cox_factor(which: str) -> FactoredZeta:
    """The parts of the two local zeta functions carrying the B_n descent identities.

    cox2 is the ratio (1 - q^2 t)/(1 - q^3 t).  cox1 is the (2,1) zeta function
    without its poles at (1 - q^5 t) and (1 - q^5 t^2), so it keeps the linear
    numerator binomials next to E/((1 - q^4 t)(1 - q^8 t^2)).
    """
    if which == "cox1":
        return local_zeta("m2n1").without((5, 1), (5, 2))
    if which == "cox2":
        one = LaurentPoly.one(local_zeta("m1n1").numerator.vars)
        return FactoredZeta(one, ((2, 1, 1), (3, 1, -1)))
    raise ValueError(f"unknown factor {which!r}")


def cox_contribution(which: str) -> SVariableRational:
    return topological_zeta(cox_factor(which), strict=False)


@dataclass(frozen=True)
class BoundaryData:
    boundary: Fraction | None  # None: continuation to the whole plane
    poles: tuple[Fraction, ...]
    exceptional: LaurentPoly | None


def continuation_boundary(case: str) -> BoundaryData:
    """beta of the exceptional numerator, with the denominator pole abscissas."""
    z = local_zeta(case)
    poles = tuple(pole_abscissas(z))
    exceptional = z.exceptional_part()
    if exceptional.is_constant():
        return BoundaryData(None, poles, None)
    return BoundaryData(beta_invariant(exceptional), poles, exceptional)
