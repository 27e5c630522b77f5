"""Sparse Laurent polynomials, rational functions and truncated power series.

Coefficients are Python integers and exponents are signed integers, so every
operation is exact.  Rational functions keep their denominators as a product
of tracked factors; addition takes the lcm of the factor lists instead of
multiplying denominators together, which keeps intermediate sizes small.
"""

from __future__ import annotations

import heapq
import json
import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping

EXPONENT_LIMIT = 2**31 - 1


class AlgebraError(Exception):
    """Base class for algebra failures."""


class VarTableMismatch(AlgebraError):
    pass


class PoleError(AlgebraError):
    pass


class SubstitutionError(AlgebraError):
    pass


class ParseError(AlgebraError):
    pass


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class VarTable:
    """Ordered, immutable list of variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self.names}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarTable({list(self.names)})"


def _as_table(vars: VarTable | Iterable[str]) -> VarTable:
    return vars if isinstance(vars, VarTable) else VarTable(vars)


def _glex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


def _check_exponents(exps: tuple[int, ...]) -> None:
    for e in exps:
        if not -EXPONENT_LIMIT <= e <= EXPONENT_LIMIT:
            raise OverflowError(f"exponent {e} out of range")


class LaurentPoly:
    """Immutable integer-coefficient Laurent polynomial over a VarTable."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VarTable | Iterable[str], terms: Mapping | None = None):
        self.vars = _as_table(vars)
        clean: dict[tuple[int, ...], int] = {}
        n = len(self.vars)
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {self.vars}")
            if not isinstance(coeff, int):
                if isinstance(coeff, Fraction) and coeff.denominator == 1:
                    coeff = coeff.numerator
                else:
                    raise TypeError(f"coefficients must be integers, got {coeff!r}")
            _check_exponents(exps)
            if coeff:
                clean[exps] = clean.get(exps, 0) + coeff
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: VarTable, terms: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, vars) -> "LaurentPoly":
        return cls._raw(_as_table(vars), {})

    @classmethod
    def const(cls, vars, c: int) -> "LaurentPoly":
        vars = _as_table(vars)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def one(cls, vars) -> "LaurentPoly":
        return cls.const(vars, 1)

    @classmethod
    def var(cls, vars, name: str) -> "LaurentPoly":
        return cls.monomial(vars, {name: 1})

    @classmethod
    def monomial(cls, vars, exps: Mapping[str, int] | tuple, coeff: int = 1) -> "LaurentPoly":
        vars = _as_table(vars)
        if isinstance(exps, Mapping):
            vec = [0] * len(vars)
            for name, e in exps.items():
                if isinstance(e, Fraction):
                    if e.denominator != 1:
                        raise SubstitutionError(f"fractional exponent {e} for {name}")
                    e = e.numerator
                vec[vars.index(name)] += int(e)
            exps = tuple(vec)
        return cls(vars, {tuple(exps): coeff})

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """Monomial with coefficient +-1, i.e. invertible in the Laurent ring."""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> int:
        return self.terms.get((0,) * len(self.vars), 0)

    # arithmetic

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise VarTableMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.vars)
            return LaurentPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._max_abs() + other._max_abs() > EXPONENT_LIMIT:
            raise OverflowError("exponent overflow in product")
        out: dict[tuple[int, ...], int] = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return LaurentPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_unit():
                raise ValueError("negative powers are only defined for unit monomials")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.vars, {tuple(x * k for x in e): c ** (-k)})
        result = LaurentPoly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _max_abs(self) -> int:
        return max((abs(x) for e in self.terms for x in e), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.terms == ({(0,) * len(self.vars): other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # structure

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _glex_key(kv[0]), reverse=True)

    def min_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(map(min, zip(*self.terms)))

    def max_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(map(max, zip(*self.terms)))

    def degree(self, name: str) -> int:
        return self.max_exponents()[self.vars.index(name)]

    def min_degree(self, name: str) -> int:
        return self.min_exponents()[self.vars.index(name)]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def shift(self, exps: tuple[int, ...]) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector `exps`."""
        return LaurentPoly._raw(
            self.vars, {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()}
        )

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def coefficients_in(self, name: str) -> dict[int, "LaurentPoly"]:
        """Split as sum_k coeff_k * name**k; coefficients keep the full VarTable."""
        i = self.vars.index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: LaurentPoly._raw(self.vars, t) for k, t in out.items()}

    def used_variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(n for n, x in zip(self.vars.names, e) if x)
        return used

    # evaluation and substitution

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        values = [Fraction(assignment[n]) if n in assignment else None for n in self.vars]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, x in zip(values, e):
                if x:
                    if v is None:
                        raise KeyError("assignment is missing a variable")
                    if v == 0 and x < 0:
                        raise ZeroDivisionError("negative power of zero")
                    term *= v**x
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "LaurentPoly"], target: VarTable | None = None) -> "LaurentPoly":
        """Replace variables by Laurent polynomials over `target`.

        Unmapped variables are carried to the same-named variable of the
        target table.  A negative power can only be taken of a unit image.
        """
        target = self.vars if target is None else _as_table(target)
        images = _images(self.vars, mapping, target)
        cache: dict[tuple[int, int], LaurentPoly] = {}

        def power(i: int, k: int) -> LaurentPoly:
            key = (i, k)
            if key not in cache:
                img = images[i]
                if k < 0 and not img.is_unit():
                    raise SubstitutionError(
                        f"negative power of non-unit image for {self.vars.names[i]}"
                    )
                cache[key] = img**k
            return cache[key]

        total = LaurentPoly.zero(target)
        for e, c in self.terms.items():
            term = LaurentPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def divexact(self, divisor: "LaurentPoly") -> "LaurentPoly | None":
        """Exact quotient in the Laurent ring, or None when it does not exist."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        dmin = divisor.min_exponents()
        pmin = self.min_exponents()
        d = divisor.shift(tuple(-x for x in dmin))
        lead_e, lead_c = max(d.terms.items(), key=lambda kv: _glex_key(kv[0]))
        if len(d.terms) == 1:
            # d is the constant lead_c after the shift
            if any(c % lead_c for c in self.terms.values()):
                return None
            scaled = {e: c // lead_c for e, c in self.terms.items()}
            return LaurentPoly._raw(self.vars, scaled).shift(tuple(-x for x in dmin))
        rem = dict(self.shift(tuple(-x for x in pmin)).terms)
        d_terms = list(d.terms.items())
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        quotient: dict[tuple[int, ...], int] = {}
        while rem:
            _, neg = heapq.heappop(heap)
            e = tuple(-x for x in neg)
            c = rem.get(e)
            if c is None:
                continue
            diff = tuple(x - y for x, y in zip(e, lead_e))
            if any(x < 0 for x in diff) or c % lead_c:
                return None
            qc = c // lead_c
            quotient[diff] = qc
            for de, dc in d_terms:
                k = tuple(x + y for x, y in zip(de, diff))
                v = rem.get(k, 0) - qc * dc
                if v:
                    if k not in rem:
                        heapq.heappush(heap, (-sum(k), tuple(-x for x in k)))
                    rem[k] = v
                else:
                    rem.pop(k, None)
        offset = tuple(p - x for p, x in zip(pmin, dmin))
        return LaurentPoly._raw(self.vars, quotient).shift(offset)

    # serialization

    def to_json_obj(self) -> dict:
        return {
            "vars": list(self.vars.names),
            "terms": [[c, list(e)] for e, c in self.sorted_terms()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "LaurentPoly":
        vars = VarTable(obj["vars"])
        terms: dict[tuple[int, ...], int] = {}
        for coeff, exps in obj["terms"]:
            key = tuple(exps)
            if key in terms:
                raise ValueError(f"repeated exponent vector {key}")
            terms[key] = coeff
        return cls(vars, terms)

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly":
        return cls.from_json_obj(json.loads(text))

    def format(self, style: str = "text", order=None) -> str:
        """Render as readable text or LaTeX.

        `order` optionally gives a sort key on exponent vectors; the default
        is descending graded-lex.
        """
        if not self.terms:
            return "0"
        items = (
            sorted(self.terms.items(), key=lambda kv: order(kv[0]))
            if order
            else self.sorted_terms()
        )
        pieces = []
        for k, (e, c) in enumerate(items):
            mono = _format_monomial(self.vars.names, e, style)
            mag = abs(c)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}" if style == "text" else f"{mag}{mono}"
            if k == 0:
                pieces.append(("-" if c < 0 else "") + body)
            elif style == "text":
                pieces.append((" - " if c < 0 else " + ") + body)
            else:
                pieces.append(("-" if c < 0 else "+") + body)
        return "".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.format()!r}, vars={list(self.vars.names)})"


def _format_monomial(names: tuple[str, ...], exps: tuple[int, ...], style: str) -> str:
    parts = []
    for name, e in zip(names, exps):
        if not e:
            continue
        if e == 1:
            parts.append(name)
        elif style == "latex":
            parts.append(f"{name}^{{{e}}}")
        else:
            parts.append(f"{name}^{e}" if e > 0 else f"{name}^({e})")
    if not parts:
        return "1"
    return ("*" if style == "text" else "").join(parts)


def _images(source: VarTable, mapping: Mapping[str, LaurentPoly], target: VarTable) -> list[LaurentPoly]:
    images = []
    for name in source:
        if name in mapping:
            img = mapping[name]
            if isinstance(img, int):
                img = LaurentPoly.const(target, img)
            if img.vars != target:
                raise VarTableMismatch(f"image of {name} is over {img.vars}, expected {target}")
            images.append(img)
        elif name in target:
            images.append(LaurentPoly.var(target, name))
        else:
            raise SubstitutionError(f"variable {name!r} is unmapped and absent from {target}")
    for name in mapping:
        if name not in source:
            raise SubstitutionError(f"mapped variable {name!r} not in {source}")
    return images


def normalize_factor(p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Split p as unit * core.

    The core has all minimal exponents zero and a positive coefficient on
    its lowest graded-lex term; the unit is a monomial with coefficient +-1.
    """
    if p.is_zero():
        raise ZeroDivisionError("zero factor")
    mins = p.min_exponents()
    core = p.shift(tuple(-x for x in mins))
    low_e, low_c = min(core.terms.items(), key=lambda kv: _glex_key(kv[0]))
    sign = 1 if low_c > 0 else -1
    if sign < 0:
        core = -core
    unit = LaurentPoly._raw(p.vars, {mins: sign})
    return unit, core


def _unit_inverse(u: LaurentPoly) -> LaurentPoly:
    (e, c), = u.terms.items()
    return LaurentPoly._raw(u.vars, {tuple(-x for x in e): c})


class RationalFn:
    """Quotient num/den of Laurent polynomials.

    The denominator is stored as a map from normalized factor to
    multiplicity; `den` is their product.  Equality is decided by
    cross-multiplication, so instances are deliberately unhashable.
    """

    __slots__ = ("vars", "num", "_factors", "_den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, num: LaurentPoly, den: LaurentPoly | int | None = None):
        if isinstance(num, int):
            if den is None or isinstance(den, int):
                raise TypeError("cannot infer variables from integers")
            num = LaurentPoly.const(den.vars, num)
        if den is None:
            den = LaurentPoly.one(num.vars)
        elif isinstance(den, int):
            den = LaurentPoly.const(num.vars, den)
        if den.vars != num.vars:
            raise VarTableMismatch(f"{num.vars} vs {den.vars}")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        unit, core = normalize_factor(den)
        self.vars = num.vars
        self.num = num * _unit_inverse(unit)
        self._factors = {} if core == 1 else {core: 1}
        self._den = None

    @classmethod
    def _make(cls, num: LaurentPoly, factors: dict[LaurentPoly, int]) -> "RationalFn":
        obj = object.__new__(cls)
        obj.vars = num.vars
        obj.num = num
        obj._factors = {f: m for f, m in factors.items() if m}
        obj._den = None
        return obj

    @classmethod
    def from_factors(cls, num: LaurentPoly, den_factors: Iterable[tuple[LaurentPoly, int]]) -> "RationalFn":
        factors: dict[LaurentPoly, int] = {}
        for f, m in den_factors:
            if m < 0:
                raise ValueError("denominator multiplicities must be nonnegative")
            unit, core = normalize_factor(f)
            num = num * _unit_inverse(unit) ** m
            if core != 1:
                factors[core] = factors.get(core, 0) + m
        return cls._make(num, factors)

    @classmethod
    def const(cls, vars, c: int) -> "RationalFn":
        return cls(LaurentPoly.const(_as_table(vars), c))

    @property
    def den(self) -> LaurentPoly:
        if self._den is None:
            d = LaurentPoly.one(self.vars)
            for f, m in self._factors.items():
                d = d * f**m
            self._den = d
        return self._den

    @property
    def factors(self) -> tuple[tuple[LaurentPoly, int], ...]:
        return tuple(self._factors.items())

    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            if other.vars != self.vars:
                raise VarTableMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise VarTableMismatch(f"{self.vars} vs {other.vars}")
            return RationalFn._make(other, {})
        if isinstance(other, int):
            return RationalFn._make(LaurentPoly.const(self.vars, other), {})
        return NotImplemented

    def _common(self, other: "RationalFn"):
        """Lift both numerators to the lcm of the two factor lists."""
        lcm = dict(self._factors)
        for f, m in other._factors.items():
            if lcm.get(f, 0) < m:
                lcm[f] = m
        lift1 = LaurentPoly.one(self.vars)
        lift2 = LaurentPoly.one(self.vars)
        for f, m in lcm.items():
            if m > self._factors.get(f, 0):
                lift1 = lift1 * f ** (m - self._factors.get(f, 0))
            if m > other._factors.get(f, 0):
                lift2 = lift2 * f ** (m - other._factors.get(f, 0))
        return self.num * lift1, other.num * lift2, lcm

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n1, n2, lcm = self._common(other)
        return RationalFn._make(n1 + n2, lcm)

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn._make(-self.num, dict(self._factors))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        factors = dict(self._factors)
        for f, m in other._factors.items():
            factors[f] = factors.get(f, 0) + m
        return RationalFn._make(self.num * other.num, factors)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFn.from_factors(self.den, [(self.num, 1)])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "RationalFn":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFn._make(self.num**k, {f: m * k for f, m in self._factors.items()})

    def equals(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        n1, n2, _ = self._common(other)
        return n1 == n2

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RationalFn, LaurentPoly, int)):
            return NotImplemented
        return self.equals(other)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self._factors

    def cancel(self) -> "RationalFn":
        """Divide out tracked denominator factors that also divide the numerator."""
        num = self.num
        factors = dict(self._factors)
        for f in list(factors):
            while factors[f]:
                quo = num.divexact(f)
                if quo is None:
                    break
                num = quo
                factors[f] -= 1
        return RationalFn._make(num, factors)

    def normalized(self) -> tuple[LaurentPoly, LaurentPoly]:
        """(num, den) with integer content removed and a positive leading denominator coefficient."""
        num, den = self.num, self.den
        g = gcd(num.content(), den.content()) or 1
        lead = den.sorted_terms()[0][1]
        if lead < 0:
            g = -g
        return (
            LaurentPoly._raw(self.vars, {e: c // g for e, c in num.terms.items()}),
            LaurentPoly._raw(self.vars, {e: c // g for e, c in den.terms.items()}),
        )

    def substitute(self, mapping: Mapping[str, LaurentPoly], target: VarTable | None = None) -> "RationalFn":
        target = self.vars if target is None else _as_table(target)
        images = _images(self.vars, mapping, target)
        # Negative powers of non-unit images move into the denominator.
        num = self.num
        extra: list[tuple[LaurentPoly, int]] = []
        mins = num.min_exponents()
        lift = [0] * len(self.vars)
        for i, img in enumerate(images):
            if mins[i] < 0 and not img.is_unit():
                lift[i] = -mins[i]
                extra.append((img, -mins[i]))
        if extra:
            num = num.shift(tuple(lift))
        new_num = num.substitute(mapping, target)
        den_factors = list(extra)
        for f, m in self._factors.items():
            img = f.substitute(mapping, target)
            if img.is_zero():
                raise PoleError("substitution makes a denominator factor vanish")
            den_factors.append((img, m))
        for img, _ in extra:
            if img.is_zero():
                raise PoleError("substitution sends a negatively-powered variable to zero")
        return RationalFn.from_factors(new_num, den_factors)

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        d = Fraction(1)
        for f, m in self._factors.items():
            d *= f.evaluate(assignment) ** m
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the assignment")
        return self.num.evaluate(assignment) / d

    def to_json_obj(self) -> dict:
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "RationalFn":
        return cls(LaurentPoly.from_json_obj(obj["num"]), LaurentPoly.from_json_obj(obj["den"]))

    @classmethod
    def from_json(cls, text: str) -> "RationalFn":
        return cls.from_json_obj(json.loads(text))

    def format(self, style: str = "text") -> str:
        num = self.num.format(style)
        if not self._factors:
            return num
        dens = []
        for f, m in sorted(self._factors.items(), key=lambda fm: fm[0].format()):
            body = f.format(style)
            if len(f.terms) > 1:
                body = f"({body})"
            dens.append(body if m == 1 else f"{body}^{m}" if style == "text" else f"{body}^{{{m}}}")
        if style == "latex":
            return f"\\frac{{{num}}}{{{''.join(dens)}}}"
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = dens[0] if len(dens) == 1 and (dens[0].startswith("(") or " " not in dens[0]) else f"({'*'.join(dens)})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RationalFn({self.format()!r})"


def rat_equal(r1: RationalFn, r2: RationalFn) -> bool:
    return r1.equals(r2)


def substitute(r: RationalFn | LaurentPoly, mapping: Mapping[str, LaurentPoly], target: VarTable | None = None):
    return r.substitute(mapping, target)


class TruncatedSeries:
    """Power series in one variable modulo variable**(order+1)."""

    __slots__ = ("variable", "coeffs")

    def __init__(self, variable: str, coeffs: list):
        self.variable = variable
        self.coeffs = list(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def _align(self, other: "TruncatedSeries") -> int:
        if self.variable != other.variable:
            raise ValueError("series in different variables")
        return min(self.order, other.order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        k = self._align(other)
        return TruncatedSeries(self.variable, [self.coeffs[i] + other.coeffs[i] for i in range(k + 1)])

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        k = self._align(other)
        out = []
        for n in range(k + 1):
            acc = self.coeffs[0] * other.coeffs[n]
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * other.coeffs[n - i]
            out.append(acc)
        return TruncatedSeries(self.variable, out)

    def evaluate(self, assignment: Mapping[str, Fraction | int]) -> list[Fraction]:
        out = []
        for c in self.coeffs:
            out.append(Fraction(c) if isinstance(c, (int, Fraction)) else c.evaluate(assignment))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.order == other.order
            and all(_coeff_equal(x, y) for x, y in zip(self.coeffs, other.coeffs))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.variable!r}, {[str(c) for c in self.coeffs]})"


def _coeff_equal(x, y) -> bool:
    if isinstance(x, RationalFn):
        return x.equals(y)
    if isinstance(y, RationalFn):
        return y.equals(x)
    return x == y


def expand_series(r: RationalFn | LaurentPoly, variable: str, K: int) -> TruncatedSeries:
    """Expand r as a power series in `variable` through order K.

    Coefficients are RationalFn over the same VarTable with `variable`
    absent.  Raises PoleError if r has a pole at variable = 0.
    """
    if isinstance(r, LaurentPoly):
        r = RationalFn(r)
    vars = r.vars
    vars.index(variable)
    num_parts = r.num.coefficients_in(variable)
    den_parts = r.den.coefficients_in(variable)
    n_low = min(num_parts, default=0)
    d_low = min(den_parts)
    if r.num.is_zero():
        zero = RationalFn.const(vars, 0)
        return TruncatedSeries(variable, [zero] * (K + 1))
    shift = n_low - d_low
    if shift < 0:
        raise PoleError(f"pole of order {-shift} at {variable} = 0")
    d0 = den_parts[d_low]
    one = RationalFn.const(vars, 1)
    inv_d0 = RationalFn._make(_unit_inverse(d0), {}) if d0.is_unit() else one / RationalFn._make(d0, {})
    coeffs: list[RationalFn] = []
    zero_poly = LaurentPoly.zero(vars)
    for n in range(K + 1 - shift):
        acc = RationalFn._make(num_parts.get(n_low + n, zero_poly), {})
        for j in range(1, n + 1):
            dj = den_parts.get(d_low + j)
            if dj is not None:
                acc = acc - coeffs[n - j] * RationalFn._make(dj, {})
        coeffs.append(acc * inv_d0)
    zero = RationalFn.const(vars, 0)
    return TruncatedSeries(variable, [zero] * shift + coeffs)


# A small expression parser, used for writing reference closed forms.

def _tokenize(text: str, vars: VarTable) -> list[tuple[str, object]]:
    names = sorted(vars.names, key=len, reverse=True)
    skip = {"\\,": None, "\\left": None, "\\right": None, "\\cdot": ("op", "*")}
    tokens: list[tuple[str, object]] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        macro = next((m for m in skip if text.startswith(m, pos)), None)
        if macro:
            if skip[macro]:
                tokens.append(skip[macro])
            pos += len(macro)
        elif ch.isdigit():
            m = re.match(r"\d+", text[pos:])
            tokens.append(("int", int(m.group())))
            pos += m.end()
        elif ch.isalpha():
            name = next((n for n in names if text.startswith(n, pos)), None)
            if name is None:
                raise ParseError(f"unknown symbol at {text[pos:pos + 10]!r}")
            tokens.append(("name", name))
            pos += len(name)
        elif ch in "+-*/^(){}":
            tokens.append(("op", ch))
            pos += 1
        else:
            raise ParseError(f"unexpected character {ch!r}")
    return tokens


class _Parser:
    def __init__(self, text: str, vars: VarTable):
        self.vars = vars
        self.tokens = _tokenize(text, vars)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if kind and (tok[0] != kind or (value is not None and tok[1] != value)):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self) -> RationalFn:
        result = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return result

    def expr(self) -> RationalFn:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_factor(self) -> bool:
        kind, val = self.peek()
        return kind in ("int", "name") or (kind == "op" and val in "({")

    def term(self) -> RationalFn:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                value = value * self.unary()
            elif tok == ("op", "/"):
                self.take()
                value = value / self.unary()
            elif self._starts_factor():
                value = value * self.power()
            else:
                return value

    def unary(self) -> RationalFn:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RationalFn:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** self.exponent()
        return base

    def exponent(self) -> int:
        kind, val = self.peek()
        if kind == "op" and val in "({":
            close = ")" if val == "(" else "}"
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            n = self.take("int")[1]
            self.take("op", close)
            return sign * n
        if self.peek() == ("op", "-"):
            self.take()
            return -self.take("int")[1]
        return self.take("int")[1]

    def atom(self) -> RationalFn:
        kind, val = self.take()
        if kind == "int":
            return RationalFn.const(self.vars, val)
        if kind == "name":
            return RationalFn(LaurentPoly.var(self.vars, val))
        if kind == "op" and val in "({":
            inner = self.expr()
            self.take("op", ")" if val == "(" else "}")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_rational(text: str, vars: VarTable | Iterable[str]) -> RationalFn:
    """Parse an arithmetic expression such as ``(1-t)(1-q^{2}t)/(1-q^3*t)``.

    Juxtaposition means multiplication and variable names are matched
    greedily against the table, so ``ab`` reads as ``a*b``.
    """
    return _Parser(text, _as_table(vars)).parse()


def parse_poly(text: str, vars: VarTable | Iterable[str]) -> LaurentPoly:
    r = parse_rational(text, vars).cancel()
    if not r.is_polynomial():
        raise ParseError(f"{text!r} is not a Laurent polynomial")
    return r.num
