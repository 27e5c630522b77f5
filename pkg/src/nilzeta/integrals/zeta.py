"""Local zeta functions in factored form and their Euler-factor analytics."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..algebra import LaurentPoly, RationalFn, _format_monomial, parse_poly
from .cases import MEASURE, ONE, _check_case, assemble_Z
from .reference import QT, exceptional_numerator

# b = q^-tau is specialized to q^k t^j; C = q^-2rho always becomes t^-1.
SPECIALIZATION = {"m1n1": (6, 2), "m2n1": (10, 3)}


class NotDirichletFactor(ValueError):
    pass


class DomainError(ValueError):
    pass


def monomial(a: int, b: int, coeff: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(QT, {"q": a, "t": b}, coeff)


def binomial(a: int, b: int, sign: int = -1) -> LaurentPoly:
    """1 - q^a t^b, or 1 + q^a t^b for sign = +1."""
    return LaurentPoly.one(QT) + monomial(a, b, sign)


def _as_binomial(f: LaurentPoly) -> tuple[LaurentPoly, tuple[int, int]]:
    """Write f = unit * (1 - q^a t^b) with b >= 0, and a > 0 when b = 0."""
    if len(f.terms) != 2 or sum(f.terms.values()) != 0 or any(abs(c) != 1 for c in f.terms.values()):
        raise NotDirichletFactor(f"{f} is not of the form 1 - q^a t^b")
    (e_low, c_low), (e_high, _) = sorted(f.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    unit = LaurentPoly.monomial(QT, e_low, c_low)
    return unit, (e_high[0] - e_low[0], e_high[1] - e_low[1])


def _binomial_factors(f: LaurentPoly) -> tuple[LaurentPoly, list[tuple[int, int]]]:
    """Write f = unit * prod (1 - q^a t^b); larger t-degrees are tried first."""
    try:
        unit, ab = _as_binomial(f)
        return unit, [ab]
    except NotDirichletFactor:
        pass
    found = []
    span = f.degree("q") - f.min_degree("q")
    candidates = [(a, b) for b in range(f.degree("t") - f.min_degree("t"), 0, -1) for a in range(span, -span - 1, -1)]
    candidates += [(a, 0) for a in range(span, 0, -1)]
    for a, b in candidates:
        while not f.is_monomial():
            quo = f.divexact(binomial(a, b))
            if quo is None:
                break
            found.append((a, b))
            f = quo
    if not f.is_unit():
        raise NotDirichletFactor(f"{f} is not a product of factors 1 - q^a t^b")
    return f, found


def _geometric_quotient(a: int, b: int, d: int) -> LaurentPoly:
    """(1 - m^g)/(1 - m^d) for 1 - q^a t^b = 1 - m^g, g = gcd(a, b)."""
    g = gcd(a, b)
    step_a, step_b = a // g * d, b // g * d
    return sum((monomial(step_a * j, step_b * j) for j in range(g // d)), LaurentPoly.zero(QT))


def _divisors_desc(g: int) -> list[int]:
    return [d for d in range(g - 1, 0, -1) if g % d == 0]


def _binomial_label(a: int, b: int, sign: int, style: str) -> str:
    mono = _format_monomial(("q", "t"), (a, b), style)
    op = "+" if sign > 0 else "-"
    return f"1{op}{mono}" if style == "latex" else f"1 {op} {mono}"


def _split_plus_binomials(p: LaurentPoly) -> tuple[list[tuple[int, int]], LaurentPoly]:
    """Pull factors 1 + q^a t^b out of p, for display only."""
    found = []
    if p.is_zero() or p.is_constant():
        return found, p
    span = p.degree("q") - p.min_degree("q")
    for b in range(1, p.degree("t") + 1):
        for a in range(-span, span + 1):
            while True:
                quo = p.divexact(binomial(a, b, +1))
                if quo is None:
                    break
                found.append((a, b))
                p = quo
    return found, p


@dataclass(frozen=True)
class FactoredZeta:
    """scalar * numerator * prod (1 - q^a t^b)^mult over (q, t)."""

    numerator: LaurentPoly
    factors: tuple[tuple[int, int, int], ...]
    scalar: Fraction = Fraction(1)

    def __post_init__(self):
        merged: Counter = Counter()
        for a, b, m in self.factors:
            if b < 0 or (a, b) == (0, 0):
                raise ValueError(f"invalid factor exponents ({a}, {b})")
            merged[(a, b)] += m
        canon = tuple(sorted(((a, b, m) for (a, b), m in merged.items() if m), key=lambda f: (f[1], f[0])))
        object.__setattr__(self, "factors", canon)
        object.__setattr__(self, "scalar", Fraction(self.scalar))

    @property
    def denominator_factors(self) -> list[tuple[int, int, int]]:
        return [(a, b, -m) for a, b, m in self.factors if m < 0]

    @property
    def numerator_factors(self) -> list[tuple[int, int, int]]:
        return [(a, b, m) for a, b, m in self.factors if m > 0]

    def to_rational(self) -> RationalFn:
        num = self.numerator * self.scalar.numerator
        for a, b, m in self.numerator_factors:
            num = num * binomial(a, b) ** m
        r = RationalFn.from_factors(num, [(binomial(a, b), m) for a, b, m in self.denominator_factors])
        if self.scalar.denominator != 1:
            r = r / RationalFn.const(QT, self.scalar.denominator)
        return r

    @classmethod
    def from_rational(cls, r: RationalFn) -> "FactoredZeta":
        """Recover the factored shape of a rational function whose denominator is a product of binomials."""
        r = r.cancel()
        num = r.num
        pending: list[tuple[int, int]] = []
        for f, m in r.factors:
            unit, pieces = _binomial_factors(f)
            (e, c), = unit.terms.items()
            num = num * LaurentPoly.monomial(QT, tuple(-x for x in e), c) ** m
            pending.extend(pieces * m)
        factors: Counter = Counter()
        while pending:
            a, b = pending.pop()
            quo = num.divexact(binomial(a, b))
            if quo is not None:
                num = quo
                continue
            g = gcd(a, b)
            for d in _divisors_desc(g):
                quo = num.divexact(_geometric_quotient(a, b, d))
                if quo is not None:
                    num = quo
                    pending.append((a // g * d, b // g * d))
                    break
            else:
                factors[(a, b)] -= 1
        if not num.is_zero() and num.degree("t") > 0:
            span = num.degree("q") - num.min_degree("q")
            for b in range(1, num.degree("t") + 1):
                for a in range(-span, span + 1):
                    while True:
                        quo = num.divexact(binomial(a, b))
                        if quo is None:
                            break
                        num = quo
                        factors[(a, b)] += 1
        scalar = Fraction(1)
        if not num.is_zero():
            content = num.content()
            (_, low_c) = min(num.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            if low_c < 0:
                content = -content
            num = LaurentPoly._raw(QT, {e: c // content for e, c in num.terms.items()})
            scalar = Fraction(content)
        return cls(num, tuple((a, b, m) for (a, b), m in factors.items()), scalar)

    def __mul__(self, other: "FactoredZeta") -> "FactoredZeta":
        if not isinstance(other, FactoredZeta):
            return NotImplemented
        return FactoredZeta(self.numerator * other.numerator, self.factors + other.factors, self.scalar * other.scalar)

    def without(self, *pairs: tuple[int, int]) -> "FactoredZeta":
        """Drop the factors (1 - q^a t^b)^m for the given (a, b)."""
        drop = set(pairs)
        return FactoredZeta(self.numerator, tuple(f for f in self.factors if f[:2] not in drop), self.scalar)

    def equals(self, other: "FactoredZeta | RationalFn") -> bool:
        other_r = other.to_rational() if isinstance(other, FactoredZeta) else other
        return self.to_rational().equals(other_r)

    def exceptional_part(self) -> LaurentPoly:
        """The numerator with all factors 1 +- q^a t^b removed."""
        return _split_plus_binomials(self.numerator)[1]

    def format(self, style: str = "latex") -> str:
        if style not in ("latex", "text"):
            raise ValueError(f"unknown style {style!r}")
        plus, rest = _split_plus_binomials(self.numerator)
        factors = [(a, b, -1, m) for a, b, m in self.numerator_factors] + [(a, b, 1, 1) for a, b in plus]
        factors.sort(key=lambda f: (f[1], f[0]))
        num_parts = [self._power(_binomial_label(a, b, s, style), m, style) for a, b, s, m in factors]
        if rest != 1:
            body = rest.format(style)
            num_parts.append(f"({body})" if len(rest.terms) > 1 or num_parts else body)
        den_parts = [self._power(_binomial_label(a, b, -1, style), m, style) for a, b, m in self.denominator_factors]
        sep = "" if style == "latex" else "*"
        num = sep.join(num_parts) or "1"
        if self.scalar != 1:
            num = f"{self.scalar}{sep}{num}" if num_parts else str(self.scalar)
        if not den_parts:
            return num
        den = sep.join(den_parts)
        if style == "latex":
            return f"\\frac{{{num}}}{{{den}}}"
        return f"{num}/({den})"

    @staticmethod
    def _power(body: str, m: int, style: str) -> str:
        if m == 1:
            return f"({body})"
        return f"({body})^{{{m}}}" if style == "latex" else f"({body})^{m}"

    def to_json_obj(self) -> dict:
        return {
            "numerator": self.numerator.to_json_obj(),
            "factors": [list(f) for f in self.factors],
            "scalar": str(self.scalar),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "FactoredZeta":
        return cls(
            LaurentPoly.from_json_obj(obj["numerator"]),
            tuple(tuple(f) for f in obj["factors"]),
            Fraction(obj["scalar"]),
        )


def specialize(r: RationalFn, case: str) -> RationalFn:
    """a -> q^-1, b -> q^k t^j, C -> t^-1."""
    _check_case(case)
    k, j = SPECIALIZATION[case]
    mapping = {"a": monomial(-1, 0), "b": monomial(k, j), "C": monomial(0, -1)}
    return r.substitute(mapping, QT)


def local_zeta(case: str) -> FactoredZeta:
    zeta = ONE + assemble_Z(case) / MEASURE
    return FactoredZeta.from_rational(specialize(zeta, case))


def published_zeta(case: str) -> FactoredZeta:
    """The closed forms stated for the two groups, entered factor by factor."""
    _check_case(case)
    if case == "m1n1":
        return FactoredZeta(LaurentPoly.one(QT), ((0, 1, 1), (2, 1, 1), (3, 1, -1), (4, 1, -1)))
    num = parse_poly("1+q^3t", QT) * exceptional_numerator()
    return FactoredZeta(num, ((0, 1, 1), (2, 1, 1), (5, 1, -1), (5, 2, -1), (4, 1, -1), (8, 2, -1)))


def series_coefficients(z: FactoredZeta, q0: int, K: int) -> list[Fraction]:
    """Coefficients of t^0..t^K of z at q = q0, computed from the factored form."""
    if q0 < 2:
        raise ValueError("q0 must be at least 2")
    if z.numerator.min_degree("t") < 0:
        raise ValueError("numerator has negative powers of t")
    q = Fraction(q0)
    coeffs = [Fraction(0)] * (K + 1)
    for (eq, et), c in z.numerator.terms.items():
        if et <= K:
            coeffs[et] += c * q**eq
    coeffs = [c * z.scalar for c in coeffs]
    for a, b, m in z.factors:
        base = q**a
        for _ in range(abs(m)):
            new = list(coeffs)
            if m > 0:
                for n in range(b, K + 1):
                    new[n] -= base * coeffs[n - b]
            else:
                # multiply by 1/(1 - base t^b) via the recurrence new[n] = coeffs[n] + base new[n-b]
                for n in range(b, K + 1):
                    new[n] = coeffs[n] + base * new[n - b]
            coeffs = new
    return coeffs


def dirichlet_nonnegativity(z: FactoredZeta, q0: int, K: int) -> bool:
    coeffs = series_coefficients(z, q0, K)
    return all(c.denominator == 1 and c >= 0 for c in coeffs)


def pole_abscissas(z: FactoredZeta) -> list[Fraction]:
    out = []
    for a, b, _ in z.denominator_factors:
        if b == 0:
            raise NotDirichletFactor(f"denominator factor 1 - q^{a} has no t")
        out.append(Fraction(a + 1, b))
    return out


def euler_abscissa(z: FactoredZeta) -> Fraction:
    """Abscissa of convergence of the Euler product over all primes: max (a+1)/b."""
    poles = pole_abscissas(z)
    if not poles:
        raise DomainError("no denominator factors")
    return max(poles)


def beta_invariant(p: LaurentPoly) -> Fraction:
    """max a/b over monomials q^a t^b of p with b >= 1."""
    if p.vars != QT:
        raise DomainError(f"expected a polynomial in (q, t), got {p.vars}")
    if p.terms.get((0, 0)) != 1:
        raise DomainError("constant term must be 1")
    ratios = [Fraction(a, b) for (a, b) in p.terms if b >= 1]
    if not ratios:
        raise DomainError("no monomial involves t")
    return max(ratios)
