"""Closed-form evaluation of lattice sums with min-exponents.

A sum is described by a :class:`GeomSumSpec`: summation variables ranging
over N (>= 1) or N0 (>= 0), order constraints between them, a monomial
summand whose exponents are linear forms or multiples of min(L1, L2), a
polynomial prefactor and a constant coefficient.

Evaluation rewrites the sum until it is a product of one-variable series:

* equality constraints merge variables;
* a constraint ``L < X`` (or ``<=``) whose larger side is a single variable
  is removed by the shift ``X = L + X'``;
* two variables that only ever occur through their sum are fused into one,
  with the number of compositions as a new prefactor;
* a remaining min(X, Y) is split into X <= Y and Y < X.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .algebra import LaurentPoly, RationalFn, VarTable


class SumError(Exception):
    pass


class UnsupportedSum(SumError):
    pass


class UnsupportedDegree(UnsupportedSum):
    pass


class InconsistentConstraints(SumError):
    pass


class DivergentSum(SumError):
    pass


RELATIONS = ("<", "<=", "=")


@dataclass(frozen=True)
class LinearForm:
    """Integer linear form sum(c_v * v) + const over named variables."""

    coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @classmethod
    def of(cls, coeffs: Mapping[str, int] | None = None, const: int = 0) -> "LinearForm":
        items = tuple(sorted((v, int(c)) for v, c in (coeffs or {}).items() if c))
        return cls(items, int(const))

    @classmethod
    def var(cls, name: str) -> "LinearForm":
        return cls(((name, 1),), 0)

    @classmethod
    def parse(cls, obj) -> "LinearForm":
        """Accept a LinearForm, a variable name, an int, or a JSON mapping."""
        if isinstance(obj, LinearForm):
            return obj
        if isinstance(obj, str):
            return cls.of({v.strip(): 1 for v in obj.split("+")})
        if isinstance(obj, int):
            return cls.of({}, obj)
        return cls.of(obj.get("coeffs", {}), obj.get("const", 0))

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    def coeff(self, name: str) -> int:
        return self.as_dict().get(name, 0)

    @property
    def support(self) -> set[str]:
        return {v for v, _ in self.coeffs}

    def __add__(self, other: "LinearForm") -> "LinearForm":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinearForm.of(d, self.const + other.const)

    def __neg__(self) -> "LinearForm":
        return LinearForm.of({v: -c for v, c in self.coeffs}, -self.const)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, k: int) -> "LinearForm":
        return LinearForm.of({v: k * c for v, c in self.coeffs}, k * self.const)

    def substitute(self, name: str, image: "LinearForm") -> "LinearForm":
        c = self.coeff(name)
        if not c:
            return self
        rest = LinearForm.of({v: x for v, x in self.coeffs if v != name}, self.const)
        return rest + image.scale(c)

    def rename(self, mapping: Mapping[str, str]) -> "LinearForm":
        return LinearForm.of({mapping.get(v, v): c for v, c in self.coeffs}, self.const)

    def single_variable(self) -> str | None:
        if self.const == 0 and len(self.coeffs) == 1 and self.coeffs[0][1] == 1:
            return self.coeffs[0][0]
        return None

    def is_constant(self) -> bool:
        return not self.coeffs

    def lower_bound(self, domains: Mapping[str, int]) -> int | None:
        """Minimum over the domain, or None if unbounded below."""
        if any(c < 0 for _, c in self.coeffs):
            return None
        return self.const + sum(c * domains[v] for v, c in self.coeffs)

    def evaluate(self, point: Mapping[str, int]) -> int:
        return self.const + sum(c * point[v] for v, c in self.coeffs)

    def to_json_obj(self) -> dict:
        return {"coeffs": dict(self.coeffs), "const": self.const}

    def __str__(self) -> str:
        parts = [(v if c == 1 else f"{c}{v}") for v, c in self.coeffs]
        if self.const or not parts:
            parts.append(str(self.const))
        return "+".join(parts).replace("+-", "-")


@dataclass(frozen=True)
class MinTerm:
    """symbol ** (mult * min(left, right))."""

    symbol: str
    mult: int
    left: LinearForm
    right: LinearForm


@dataclass(frozen=True)
class Constraint:
    left: LinearForm
    rel: str
    right: LinearForm

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class GeomSumSpec:
    """Declarative lattice sum.

    ``domains`` holds the lower bound (0 or 1) of each variable.
    ``prefactor`` maps exponent vectors over ``variables`` to integer
    coefficients and ``coefficient`` is a constant RationalFn over
    ``symbols``.
    """

    variables: tuple[str, ...]
    domains: tuple[int, ...]
    symbols: tuple[str, ...]
    powers: tuple[tuple[str, LinearForm], ...] = ()
    mins: tuple[MinTerm, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    prefactor: tuple[tuple[tuple[int, ...], int], ...] = ()
    coefficient: RationalFn | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.domains) != len(self.variables):
            raise ValueError("one domain flag per variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate summation variables")
        if any(d not in (0, 1) for d in self.domains):
            raise ValueError("domains must be 0 (N0) or 1 (N)")
        known = set(self.variables)
        forms = [f for _, f in self.powers]
        forms += [m.left for m in self.mins] + [m.right for m in self.mins]
        forms += [c.left for c in self.constraints] + [c.right for c in self.constraints]
        for f in forms:
            if not f.support <= known:
                raise ValueError(f"linear form {f} uses unknown variables")
        for sym, _ in self.powers:
            if sym not in self.symbols:
                raise ValueError(f"unknown symbol {sym!r}")
        for m in self.mins:
            if m.symbol not in self.symbols:
                raise ValueError(f"unknown symbol {m.symbol!r}")
        for exps, _ in self.prefactor:
            if len(exps) != len(self.variables) or any(e < 0 for e in exps):
                raise ValueError("prefactor exponents must be nonnegative, one per variable")
            if sum(exps) > 2:
                raise UnsupportedDegree("prefactor total degree exceeds 2")
        if self.coefficient is not None and self.coefficient.vars != VarTable(self.symbols):
            raise ValueError("coefficient must be over the symbol table")

    @property
    def k(self) -> int:
        return len(self.variables)

    @property
    def symbol_table(self) -> VarTable:
        return VarTable(self.symbols)

    def coefficient_value(self) -> RationalFn:
        if self.coefficient is None:
            return RationalFn.const(self.symbol_table, 1)
        return self.coefficient

    def prefactor_poly(self) -> LaurentPoly:
        table = VarTable(self.variables)
        if not self.prefactor:
            return LaurentPoly.one(table)
        return LaurentPoly(table, dict(self.prefactor))

    def rename(self, mapping: Mapping[str, str]) -> "GeomSumSpec":
        """Rename summation variables."""
        ren = lambda f: f.rename(mapping)  # noqa: E731
        return replace(
            self,
            variables=tuple(mapping.get(v, v) for v in self.variables),
            powers=tuple((s, ren(f)) for s, f in self.powers),
            mins=tuple(replace(m, left=ren(m.left), right=ren(m.right)) for m in self.mins),
            constraints=tuple(replace(c, left=ren(c.left), right=ren(c.right)) for c in self.constraints),
        )

    # JSON

    def to_json_obj(self) -> dict:
        return {
            "variables": [{"name": v, "domain": "N" if d else "N0"} for v, d in zip(self.variables, self.domains)],
            "symbols": list(self.symbols),
            "constraints": [[c.left.to_json_obj(), c.rel, c.right.to_json_obj()] for c in self.constraints],
            "exponent": [[s, f.to_json_obj()] for s, f in self.powers]
            + [[m.symbol, m.mult, {"min": [m.left.to_json_obj(), m.right.to_json_obj()]}] for m in self.mins],
            "prefactor": [[list(e), c] for e, c in self.prefactor],
            "coefficient": self.coefficient_value().to_json_obj(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "GeomSumSpec":
        variables = tuple(v["name"] for v in obj["variables"])
        domains = tuple(1 if v["domain"] == "N" else 0 for v in obj["variables"])
        powers, mins = [], []
        for entry in obj["exponent"]:
            if len(entry) == 2:
                powers.append((entry[0], LinearForm.parse(entry[1])))
            else:
                left, right = entry[2]["min"]
                mins.append(MinTerm(entry[0], int(entry[1]), LinearForm.parse(left), LinearForm.parse(right)))
        constraints = tuple(
            Constraint(LinearForm.parse(l), rel, LinearForm.parse(r)) for l, rel, r in obj.get("constraints", [])
        )
        coefficient = None
        if "coefficient" in obj:
            coefficient = RationalFn.from_json_obj(obj["coefficient"])
        return cls(
            variables=variables,
            domains=domains,
            symbols=tuple(obj["symbols"]),
            powers=tuple(powers),
            mins=tuple(mins),
            constraints=constraints,
            prefactor=tuple((tuple(e), int(c)) for e, c in obj.get("prefactor", [])),
            coefficient=coefficient,
        )

    @classmethod
    def from_json(cls, text: str) -> "GeomSumSpec":
        return cls.from_json_obj(json.loads(text))


def make_spec(
    variables: Iterable[str] | str,
    symbols: Iterable[str] | str,
    powers: Mapping[str, object] | None = None,
    mins: Iterable[tuple] = (),
    constraints: Iterable[tuple] = (),
    domains: Mapping[str, int] | None = None,
    prefactor: Mapping[tuple[int, ...], int] | None = None,
    coefficient: RationalFn | None = None,
) -> GeomSumSpec:
    """Convenience builder; linear forms may be written as ``"X+Y"``.

    ``mins`` entries are ``(symbol, mult, left, right)`` and ``constraints``
    entries are ``(left, rel, right)``.
    """
    variables = tuple(variables.split() if isinstance(variables, str) else variables)
    symbols = tuple(symbols.split() if isinstance(symbols, str) else symbols)
    domains = domains or {}
    return GeomSumSpec(
        variables=variables,
        domains=tuple(domains.get(v, 1) for v in variables),
        symbols=symbols,
        powers=tuple((s, LinearForm.parse(f)) for s, f in (powers or {}).items()),
        mins=tuple(MinTerm(s, m, LinearForm.parse(l), LinearForm.parse(r)) for s, m, l, r in mins),
        constraints=tuple(Constraint(LinearForm.parse(l), rel, LinearForm.parse(r)) for l, rel, r in constraints),
        prefactor=tuple((prefactor or {}).items()),
        coefficient=coefficient,
    )


def split_min(spec: GeomSumSpec, index: int = 0) -> tuple[GeomSumSpec, GeomSumSpec]:
    """Split on min number `index`: regions left <= right and right < left."""
    term = spec.mins[index]
    rest = spec.mins[:index] + spec.mins[index + 1:]
    le = replace(
        spec,
        mins=rest,
        powers=spec.powers + ((term.symbol, term.left.scale(term.mult)),),
        constraints=spec.constraints + (Constraint(term.left, "<=", term.right),),
    )
    gt = replace(
        spec,
        mins=rest,
        powers=spec.powers + ((term.symbol, term.right.scale(term.mult)),),
        constraints=spec.constraints + (Constraint(term.right, "<", term.left),),
    )
    return le, gt


# Evaluation works on a mutable working state.


@dataclass
class _State:
    domains: dict[str, int]
    powers: dict[str, LinearForm]
    mins: list[MinTerm]
    constraints: list[Constraint]
    prefactor: dict[tuple[tuple[str, int], ...], int]  # monomial as sorted (var, exp) pairs
    symbols: tuple[str, ...]
    counter: itertools.count

    def fresh(self, base: str) -> str:
        while True:
            name = f"{base}_{next(self.counter)}"
            if name not in self.domains:
                return name

    def copy(self) -> "_State":
        return _State(
            dict(self.domains),
            dict(self.powers),
            list(self.mins),
            list(self.constraints),
            dict(self.prefactor),
            self.symbols,
            self.counter,
        )

    def forms(self) -> list[LinearForm]:
        out = list(self.powers.values())
        for m in self.mins:
            out += [m.left, m.right]
        for c in self.constraints:
            out += [c.left, c.right]
        return out

    def substitute(self, name: str, image: LinearForm) -> None:
        """Replace variable `name` by `image` everywhere (drops it from domains)."""
        sub = lambda f: f.substitute(name, image)  # noqa: E731
        self.powers = {s: sub(f) for s, f in self.powers.items()}
        self.mins = [replace(m, left=sub(m.left), right=sub(m.right)) for m in self.mins]
        self.constraints = [replace(c, left=sub(c.left), right=sub(c.right)) for c in self.constraints]
        new_pref: dict = {}
        for mono, coeff in self.prefactor.items():
            for key, c in _expand_monomial(mono, name, image).items():
                new_pref[key] = new_pref.get(key, 0) + coeff * c
        self.prefactor = {k: c for k, c in new_pref.items() if c}
        del self.domains[name]


def _expand_monomial(mono: tuple[tuple[str, int], ...], name: str, image: LinearForm) -> dict:
    """Expand a prefactor monomial after substituting `name` -> image."""
    exps = dict(mono)
    e = exps.pop(name, 0)
    if not e:
        return {mono: 1}
    # (c0 + sum c_v v)^e expanded term by term
    result: dict[tuple, int] = {tuple(sorted(exps.items())): 1}
    terms = [({}, image.const)] + [({v: 1}, c) for v, c in image.coeffs]
    for _ in range(e):
        nxt: dict[tuple, int] = {}
        for key, coeff in result.items():
            base = dict(key)
            for extra, c in terms:
                if not c:
                    continue
                merged = dict(base)
                for v, x in extra.items():
                    merged[v] = merged.get(v, 0) + x
                k2 = tuple(sorted(merged.items()))
                nxt[k2] = nxt.get(k2, 0) + coeff * c
        result = nxt
    return result


def _initial_state(spec: GeomSumSpec) -> _State:
    powers: dict[str, LinearForm] = {}
    for sym, f in spec.powers:
        powers[sym] = powers.get(sym, LinearForm()) + f
    pref: dict = {}
    for exps, c in spec.prefactor or (((0,) * spec.k, 1),):
        key = tuple(sorted((v, e) for v, e in zip(spec.variables, exps) if e))
        pref[key] = pref.get(key, 0) + c
    return _State(
        domains=dict(zip(spec.variables, spec.domains)),
        powers=powers,
        mins=list(spec.mins),
        constraints=list(spec.constraints),
        prefactor={k: c for k, c in pref.items() if c},
        symbols=spec.symbols,
        counter=itertools.count(),
    )


def evaluate(spec: GeomSumSpec, assumptions: Mapping[str, Fraction] | None = None) -> RationalFn:
    """Closed form of the sum as a RationalFn over ``spec.symbols``.

    Convergence of each one-variable factor is checked either against the
    default assumption that every symbol is small and positive (each ratio
    must be a monomial with nonnegative exponents), or against an explicit
    witness point in ``assumptions``.
    """
    _check_acyclic(spec)
    state = _initial_state(spec)
    table = spec.symbol_table
    return spec.coefficient_value() * _evaluate_state(state, table, assumptions)


def _check_acyclic(spec: GeomSumSpec) -> None:
    edges: dict[str, list[tuple[str, bool]]] = {v: [] for v in spec.variables}
    for c in spec.constraints:
        a, b = c.left.single_variable(), c.right.single_variable()
        if a is None or b is None:
            continue
        edges[a].append((b, c.rel == "<"))
        if c.rel == "=":
            edges[b].append((a, False))
    # a cycle through a strict edge is infeasible
    for start in spec.variables:
        stack = [(start, False)]
        seen = set()
        while stack:
            node, strict = stack.pop()
            for nxt, s in edges[node]:
                flag = strict or s
                if nxt == start and flag:
                    raise InconsistentConstraints(f"cyclic strict constraints through {start}")
                if (nxt, flag) not in seen:
                    seen.add((nxt, flag))
                    stack.append((nxt, flag))


def _evaluate_state(state: _State, table: VarTable, assumptions) -> RationalFn:
    while True:
        status = _simplify(state)
        if status == "empty":
            return RationalFn.const(table, 0)
        if _resolve_equality(state) or _resolve_constraint(state):
            continue
        if _needs_fusion(state) and _fuse_pair(state):
            continue
        if state.constraints:
            raise UnsupportedSum(f"cannot resolve constraints {[str_c(c) for c in state.constraints]}")
        if state.mins:
            term = state.mins[0]
            if term.left.single_variable() is None or term.right.single_variable() is None:
                raise UnsupportedSum(f"cannot split min({term.left}, {term.right})")
            total = RationalFn.const(table, 0)
            for first, second, rel in ((term.left, term.right, "<="), (term.right, term.left, "<")):
                branch = state.copy()
                branch.mins = state.mins[1:]
                _add_power(branch, term.symbol, first.scale(term.mult))
                branch.constraints.append(Constraint(first, rel, second))
                total = total + _evaluate_state(branch, table, assumptions)
            return total
        return _close_product(state, table, assumptions)


def str_c(c: Constraint) -> str:
    return f"{c.left} {c.rel} {c.right}"


def _add_power(state: _State, symbol: str, form: LinearForm) -> None:
    state.powers[symbol] = state.powers.get(symbol, LinearForm()) + form


def _simplify(state: _State) -> str | None:
    """Pull common parts out of mins and drop decided constraints."""
    mins = []
    for m in state.mins:
        left, right = m.left, m.right
        ld, rd = left.as_dict(), right.as_dict()
        common = {v: min(ld.get(v, 0), rd.get(v, 0)) for v in set(ld) | set(rd)}
        common_form = LinearForm.of(common, min(left.const, right.const))
        left, right = left - common_form, right - common_form
        if common_form.coeffs or common_form.const:
            _add_power(state, m.symbol, common_form.scale(m.mult))
        diff = left - right
        lb = diff.lower_bound(state.domains)
        if lb is not None and lb >= 0:
            _add_power(state, m.symbol, right.scale(m.mult))
            continue
        lb = (-diff).lower_bound(state.domains)
        if lb is not None and lb >= 0:
            _add_power(state, m.symbol, left.scale(m.mult))
            continue
        mins.append(MinTerm(m.symbol, m.mult, left, right))
    state.mins = mins
    constraints = []
    for c in state.constraints:
        diff = c.right - c.left
        lo = diff.lower_bound(state.domains)
        hi = (-diff).lower_bound(state.domains)
        if c.rel == "=":
            if diff.is_constant():
                if diff.const:
                    return "empty"
                continue
        elif c.rel == "<":
            if lo is not None and lo > 0:
                continue
            if hi is not None and hi >= 0:  # right - left <= 0 everywhere
                return "empty"
        else:
            if lo is not None and lo >= 0:
                continue
            if hi is not None and hi > 0:
                return "empty"
        constraints.append(c)
    state.constraints = constraints
    return None


def _resolve_equality(state: _State) -> bool:
    for i, c in enumerate(state.constraints):
        if c.rel != "=":
            continue
        for name, other in ((c.left.single_variable(), c.right), (c.right.single_variable(), c.left)):
            if name is None or name in other.support:
                continue
            lb = other.lower_bound(state.domains)
            need = state.domains[name]
            if lb is None or lb < need:
                single = other.single_variable()
                if single is None:
                    continue
                state.domains[single] = max(state.domains[single], need)
            del state.constraints[i]
            state.substitute(name, other)
            return True
    return False


def _resolve_constraint(state: _State) -> bool:
    """Apply a shift X = L + X' for a constraint L < X or L <= X."""
    upper_count: dict[str, int] = {}
    for c in state.constraints:
        v = c.right.single_variable()
        if v is not None:
            upper_count[v] = upper_count.get(v, 0) + 1
    for i, c in enumerate(state.constraints):
        v = c.right.single_variable()
        if v is None or upper_count[v] != 1 or v in c.left.support:
            continue
        strict = c.rel == "<"
        new_low = 1 if strict else 0
        lb = c.left.lower_bound(state.domains)
        if lb is None or lb + new_low < state.domains[v]:
            continue
        fresh = state.fresh(v)
        del state.constraints[i]
        state.domains[fresh] = new_low
        state.substitute(v, c.left + LinearForm.var(fresh))
        return True
    return False


def _needs_fusion(state: _State) -> bool:
    for m in state.mins:
        if m.left.single_variable() is None or m.right.single_variable() is None:
            return True
    for c in state.constraints:
        if c.right.single_variable() is None and c.left.single_variable() is None:
            return True
        if c.rel != "=" and c.right.single_variable() is None:
            return True
    return False


def _fuse_pair(state: _State) -> bool:
    """Fuse two variables that only occur through their sum."""
    forms = state.forms()
    pref_vars = {v for mono in state.prefactor for v, _ in mono}
    names = sorted(state.domains)
    for u, w in itertools.combinations(names, 2):
        if u in pref_vars or w in pref_vars:
            continue
        if not any(f.coeff(u) for f in forms):
            continue
        if any(f.coeff(u) != f.coeff(w) for f in forms):
            continue
        lu, lw = state.domains[u], state.domains[w]
        fused = state.fresh(u + w)
        low = lu + lw
        # compositions of n into u >= lu, w >= lw: n - low + 1, which
        # vanishes at n = low - 1, so N x N may be fused onto N
        state.domains[fused] = min(low, 1)
        count = {((fused, 1),): 1}
        if 1 - low:
            count[()] = 1 - low
        sub = LinearForm.var(fused)
        state.substitute(u, sub)
        # w now must disappear: forms had coeff(u) == coeff(w), so replacing
        # u by the fused variable and w by 0 gives the right forms
        state.substitute(w, LinearForm())
        new_pref: dict = {}
        for mono, c in state.prefactor.items():
            for extra, k in count.items():
                merged = dict(mono)
                for v, x in extra:
                    merged[v] = merged.get(v, 0) + x
                key = tuple(sorted(merged.items()))
                new_pref[key] = new_pref.get(key, 0) + c * k
        state.prefactor = {k: c for k, c in new_pref.items() if c}
        return True
    return False


def _geometric_moment(e: int, delta: int, z: RationalFn) -> RationalFn:
    """sum_{n >= delta} n**e z**n as a rational function of z."""
    one = RationalFn.const(z.vars, 1)
    if e == 0:
        full = one / (one - z)
    elif e == 1:
        full = z / (one - z) ** 2
    elif e == 2:
        full = z * (one + z) / (one - z) ** 3
    else:
        raise UnsupportedDegree(f"prefactor degree {e} in one variable")
    for n in range(delta):
        full = full - z**n * n**e
    return full


def _close_product(state: _State, table: VarTable, assumptions) -> RationalFn:
    ratios: dict[str, LaurentPoly] = {}
    constant = LaurentPoly.one(table)
    for sym, form in state.powers.items():
        if form.const:
            constant = constant * LaurentPoly.monomial(table, {sym: form.const})
    for v in state.domains:
        exps = {sym: form.coeff(v) for sym, form in state.powers.items() if form.coeff(v)}
        z = LaurentPoly.monomial(table, exps)
        _check_ratio(v, z, assumptions)
        ratios[v] = z
    total = RationalFn.const(table, 0)
    for mono, coeff in state.prefactor.items():
        exps = dict(mono)
        term = RationalFn.const(table, coeff)
        for v in state.domains:
            term = term * _geometric_moment(exps.get(v, 0), state.domains[v], RationalFn(ratios[v]))
        total = total + term
    return total * RationalFn(constant)


def _check_ratio(var: str, z: LaurentPoly, assumptions) -> None:
    (exps, _), = z.terms.items()
    if not any(exps):
        raise DivergentSum(f"summand is constant along {var}")
    if assumptions is None:
        if any(e < 0 for e in exps):
            raise DivergentSum(f"ratio {z} along {var} is not small near the origin; pass assumptions")
    elif abs(z.evaluate(assumptions)) >= 1:
        raise DivergentSum(f"ratio {z} along {var} has modulus >= 1 at the assumption point")


# Direct numeric summation


def truncated_sum(
    spec: GeomSumSpec, assignment: Mapping[str, Fraction], N: int
) -> tuple[Fraction, Fraction]:
    """Exact partial sum over the box (every coordinate <= N) and a tail bound.

    The box is enumerated with numpy; summands are grouped by their symbol
    exponent vector so only one exact rational evaluation per distinct
    monomial is needed.
    """
    values = {s: Fraction(assignment[s]) for s in spec.symbols}
    for s, v in values.items():
        if abs(v) >= 1:
            raise DivergentSum(f"symbol {s} has |value| >= 1")
    coeff = spec.coefficient_value().evaluate(values)
    partial = coeff * _box_sum(spec, values, N)
    return partial, abs(coeff) * _tail_bound(spec, values, N)


def _form_range(form: LinearForm, lows: Mapping[str, int], N: int) -> tuple[int, int]:
    lo = hi = form.const
    for v, c in form.coeffs:
        a, b = c * lows[v], c * N
        lo += min(a, b)
        hi += max(a, b)
    return lo, hi


def _box_sum(spec: GeomSumSpec, values: Mapping[str, Fraction], N: int) -> Fraction:
    ranges, sizes, strides, acc = _box_histogram(spec, N)
    symbols = spec.symbols
    dense = isinstance(acc, np.ndarray)
    # Sum w * prod v**e with v = p/d, written as v**lo * (p/d)**(e - lo) and
    # cleared to the common denominator prod d**(hi - lo).
    nums = [values[s].numerator for s in symbols]
    dens = [values[s].denominator for s in symbols]
    spans = [hi - lo for lo, hi in ranges]
    if dense:
        tensor = np.rint(acc).astype(np.int64).astype(object).reshape(sizes)
        for p, d, span in zip(reversed(nums), reversed(dens), reversed(spans)):
            vec = np.array([p**i * d ** (span - i) for i in range(span + 1)], dtype=object)
            tensor = tensor.dot(vec)
        total = int(tensor)
    else:
        total = 0
        for k_, w_ in acc.items():
            term = int(round(w_))
            rem = k_
            for stride, p, d, span in zip(strides, nums, dens, spans):
                idx, rem = divmod(rem, stride)
                term *= p**idx * d ** (span - idx)
            total += term
    result = Fraction(total)
    for (lo, _), p, d, span in zip(ranges, nums, dens, spans):
        result *= Fraction(p, d) ** lo / Fraction(d) ** span
    return result


@functools.lru_cache(maxsize=32)
def _box_histogram(spec: GeomSumSpec, N: int):
    """Weighted counts of lattice points in the box, keyed by exponent vector."""
    variables = spec.variables
    lows = dict(zip(variables, spec.domains))
    symbols = spec.symbols
    # global exponent ranges per symbol
    ranges = []
    for s in symbols:
        lo = hi = 0
        for sym, f in spec.powers:
            if sym == s:
                a, b = _form_range(f, lows, N)
                lo, hi = lo + a, hi + b
        for m in spec.mins:
            if m.symbol == s:
                l1, h1 = _form_range(m.left, lows, N)
                l2, h2 = _form_range(m.right, lows, N)
                a, b = m.mult * min(l1, l2), m.mult * min(h1, h2)
                lo, hi = lo + min(a, b), hi + max(a, b)
        ranges.append((lo, hi))
    sizes = [hi - lo + 1 for lo, hi in ranges]
    total_size = 1
    for n in sizes:
        total_size *= n
    dense = total_size <= 1 << 22
    acc = np.zeros(total_size, dtype=np.float64) if dense else {}
    strides = []
    for i in range(len(sizes)):
        stride = 1
        for n in sizes[i + 1:]:
            stride *= n
        strides.append(stride)

    inner = variables[-4:]
    outer = variables[: len(variables) - len(inner)]
    grids = np.meshgrid(*[np.arange(lows[v], N + 1, dtype=np.int64) for v in inner], indexing="ij")
    inner_vals = {v: g.ravel() for v, g in zip(inner, grids)}
    size = grids[0].size if grids else 1
    pref_terms = spec.prefactor or (((0,) * spec.k, 1),)

    def value(form: LinearForm, point: Mapping[str, object]):
        out = form.const
        for v, c in form.coeffs:
            out = out + c * point[v]
        return out

    for outer_point in itertools.product(*[range(lows[v], N + 1) for v in outer]):
        point: dict[str, object] = dict(zip(outer, outer_point))
        point.update(inner_vals)
        mask = np.ones(size, dtype=bool)
        for c in spec.constraints:
            mask &= _compare(value(c.left, point), c.rel, value(c.right, point))
        idx = np.flatnonzero(mask)
        if not idx.size:
            continue
        point.update({v: arr[idx] for v, arr in inner_vals.items()})
        n_pts = idx.size
        key = np.zeros(n_pts, dtype=np.int64)
        for s, (lo, _), stride in zip(symbols, ranges, strides):
            e = np.zeros(n_pts, dtype=np.int64)
            for sym, f in spec.powers:
                if sym == s:
                    e = e + value(f, point)
            for m in spec.mins:
                if m.symbol == s:
                    e = e + m.mult * np.minimum(value(m.left, point), value(m.right, point))
            key += (e - lo) * stride
        weight = np.zeros(n_pts, dtype=np.int64)
        for exps, c in pref_terms:
            w = np.full(n_pts, c, dtype=np.int64)
            for v, x in zip(variables, exps):
                if x:
                    w = w * np.asarray(point[v]) ** x
            weight = weight + w
        if dense:
            acc += np.bincount(key, weights=weight, minlength=total_size)
        else:
            uniq, inv = np.unique(key, return_inverse=True)
            sums = np.bincount(inv, weights=weight)
            for k_, w_ in zip(uniq.tolist(), sums.tolist()):
                acc[k_] = acc.get(k_, 0) + w_

    if dense and np.abs(acc).max(initial=0) >= 2**53:
        raise OverflowError("lattice weights exceed exact float range")
    return ranges, sizes, strides, acc


def _compare(left, rel: str, right):
    if rel == "<":
        return left < right
    if rel == "<=":
        return left <= right
    return left == right


def _moment_tail(e: int, z: Fraction, start: int, stop: int | None) -> Fraction:
    """sum_{start <= n (<= stop)} n**e z**n for 0 <= z < 1."""
    if stop is not None:
        return sum((Fraction(n) ** e * z**n for n in range(start, stop + 1)), Fraction(0))
    full = {0: 1 / (1 - z), 1: z / (1 - z) ** 2, 2: z * (1 + z) / (1 - z) ** 3}
    if e not in full:
        raise UnsupportedDegree(f"prefactor degree {e} in one variable")
    return full[e] - sum((Fraction(n) ** e * z**n for n in range(0, start)), Fraction(0))


def _tail_bound(spec: GeomSumSpec, values: Mapping[str, Fraction], N: int) -> Fraction:
    for m in spec.mins:
        if m.mult < 0 or m.left.lower_bound(dict(zip(spec.variables, spec.domains))) is None:
            raise UnsupportedSum("tail bound needs nonnegative min-exponents")
        if m.right.lower_bound(dict(zip(spec.variables, spec.domains))) is None:
            raise UnsupportedSum("tail bound needs nonnegative min-exponents")
        if abs(values[m.symbol]) > 1:
            raise DivergentSum(f"min symbol {m.symbol} exceeds 1 in modulus")
    lows = dict(zip(spec.variables, spec.domains))
    constant = Fraction(1)
    ratios = {}
    for v in spec.variables:
        ratios[v] = Fraction(1)
    for sym, f in spec.powers:
        val = abs(values[sym])
        constant *= val**f.const
        for v, c in f.coeffs:
            ratios[v] *= val**c
    for v, z in ratios.items():
        if z >= 1:
            raise DivergentSum(f"summand does not decay along {v}")
    total = Fraction(0)
    for exps, c in spec.prefactor or (((0,) * spec.k, 1),):
        e_of = dict(zip(spec.variables, exps))
        full = {v: _moment_tail(e_of[v], ratios[v], lows[v], None) for v in spec.variables}
        for v in spec.variables:
            prod = _moment_tail(e_of[v], ratios[v], N + 1, None)
            for w in spec.variables:
                if w != v:
                    prod *= full[w]
            total += abs(c) * prod
    return constant * total


# Named sums

_ABC = ("a", "b", "C")
_SUBCASE_VARS = ("X", "Y", "W1", "W2", "W3")


def _measure(k: int) -> RationalFn:
    """(1 - a)**k over the (a, b, C) table."""
    table = VarTable(_ABC)
    one = LaurentPoly.one(table)
    return RationalFn((one - LaurentPoly.var(table, "a")) ** k)


def lattice_identity_spec(which: int) -> GeomSumSpec:
    """The three basic sums over symbols (a, b, c).

    1: sum_X X a^X;  2: sum_{X,Y} a^X b^Y c^min(X,Y);
    3: sum_{X,Y,Z} a^X b^(Y+Z) c^min(X,Y+Z).
    """
    if which == 1:
        return make_spec("X", "a b c", powers={"a": "X"}, prefactor={(1,): 1})
    if which == 2:
        return make_spec("X Y", "a b c", powers={"a": "X", "b": "Y"}, mins=[("c", 1, "X", "Y")])
    if which == 3:
        return make_spec("X Y Z", "a b c", powers={"a": "X", "b": "Y+Z"}, mins=[("c", 1, "X", "Y+Z")])
    raise ValueError(f"unknown identity {which}")


def _subcase(which: int) -> GeomSumSpec:
    powers = {"a": "X+Y+W1+W2+W3", "b": "X"}
    mins: list[tuple] = []
    if which == 1:
        powers["C"] = LinearForm.of({"X": 2})
        constraints = [("X", "<=", v) for v in ("Y", "W1", "W2", "W3")]
    elif which == 2:
        powers["C"] = "Y"
        mins = [("C", 1, "X", "W1")]
        constraints = [("Y", "<", "X"), ("Y", "<", "W1"), ("Y", "<=", "W2"), ("Y", "<=", "W3")]
    elif which == 3:
        powers["C"] = "W1"
        mins = [("C", 1, "X", "Y")]
        constraints = [("W1", "<", "X"), ("W1", "<", "Y"), ("W1", "<=", "W2"), ("W1", "<=", "W3")]
    elif which == 4:
        powers["C"] = "W1"
        mins = [("C", 1, "X", "Y")]
        constraints = [("Y", "<", "X"), ("Y", "=", "W1"), ("Y", "<=", "W2"), ("Y", "<=", "W3")]
    elif which in (5, 6, 7):
        low, other = ("W3", "W2") if which == 6 else ("W2", "W3")
        mins = [("C", 1, f"X+{low}", "Y+W1")]
        constraints = [(low, "<", v) for v in ("X", "Y", "W1")]
        constraints.append((low, "=", other) if which == 7 else (low, "<", other))
    else:
        raise ValueError(f"unknown subcase {which}")
    return make_spec(
        _SUBCASE_VARS, _ABC, powers=powers, mins=mins, constraints=constraints, coefficient=_measure(5)
    )


def integral_as_sum(kind: str) -> GeomSumSpec:
    """Lattice-sum form of a p-adic integral over (a, b, C) = (q^-1, q^-s, q^-t).

    Kinds: ``int_p`` (the integral of |x|^s over p), ``lemma23``
    (|x|^s ||x, y||^t over p^2), ``lemma24`` (|x|^s ||x, yz||^t over p^3) and
    ``subcase1`` .. ``subcase7``.  The Haar measure of a valuation cell,
    (1 - q^-1)^k q^-(sum of valuations), is built into each spec.
    """
    if kind == "int_p":
        return make_spec("X", _ABC, powers={"a": "X", "b": "X"}, coefficient=_measure(1))
    if kind == "lemma23":
        return make_spec(
            "X Y", _ABC, powers={"a": "X+Y", "b": "X"}, mins=[("C", 1, "X", "Y")], coefficient=_measure(2)
        )
    if kind == "lemma24":
        return make_spec(
            "X Y Z", _ABC, powers={"a": "X+Y+Z", "b": "X"}, mins=[("C", 1, "X", "Y+Z")], coefficient=_measure(3)
        )
    if kind.startswith("subcase"):
        try:
            which = int(kind[len("subcase"):].strip("()"))
        except ValueError:
            raise ValueError(f"unknown integral kind {kind!r}") from None
        return _subcase(which)
    raise ValueError(f"unknown integral kind {kind!r}")


INTEGRAL_KINDS = ("int_p", "lemma23", "lemma24") + tuple(f"subcase{i}" for i in range(1, 8))
