"""Brute-force bounds for p-adic integrals by enumerating residue cells mod p^N.

An integrand is q^(-E) times a constant, where E is a nonnegative
combination of terms min{v(f) : f in S} over polynomial "atoms" f with
integer coefficients.  Coordinates are split into groups, and each atom
depends on the coordinates of a single group.  A histogram of capped
atom valuations is computed per group and the histograms are combined.

Valuations below N are determined by the residue cell.  An atom that
vanishes mod p^N has valuation somewhere in [N, oo), so the integrand on
its cell lies between its values at valuation oo and at valuation N.
Summing both extremes gives a rigorous interval.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from ..algebra import LaurentPoly, VarTable, parse_poly
from ..parallel import ordered_map

DEFAULT_BUDGET = 10**8
CHUNK_CELLS = 1 << 20


class TractabilityError(RuntimeError):
    pass


@dataclass(frozen=True)
class Domain:
    """One coordinate's range: ``ideal`` p^k, ``shell`` p^k - p^(k+1), ``coset`` r + p."""

    kind: str
    k: int = 0
    residue: int = 0

    def residues(self, p: int, N: int) -> np.ndarray:
        M = p**N
        if self.kind == "coset":
            return (self.residue % p) + p * np.arange(p ** (N - 1), dtype=np.int64)
        if self.k >= N:
            raise TractabilityError(f"level {N} cannot resolve a domain at depth {self.k}")
        multiples = np.arange(0, M, p**self.k, dtype=np.int64)
        if self.kind == "ideal":
            return multiples
        if self.kind == "shell":
            return multiples[multiples % p ** (self.k + 1) != 0]
        raise ValueError(f"unknown domain kind {self.kind!r}")


O = Domain("ideal", 0)
P = Domain("ideal", 1)
P2 = Domain("ideal", 2)
UNITS = Domain("shell", 0)
P_MINUS_P2 = Domain("shell", 1)


def coset(r: int) -> Domain:
    return Domain("coset", residue=r)


@dataclass(frozen=True)
class CoordinateGroup:
    names: tuple[str, ...]
    domains: tuple[Domain, ...]
    atoms: tuple[tuple[str, str], ...]  # (label, polynomial text)

    def __post_init__(self):
        if len(self.names) != len(self.domains):
            raise ValueError("each coordinate needs exactly one domain")

    def atom_polys(self) -> list[LaurentPoly]:
        table = VarTable(self.names)
        polys = [parse_poly(text, table) for _, text in self.atoms]
        for p in polys:
            if any(x < 0 for x in p.min_exponents()):
                raise ValueError("atoms must be polynomials")
        return polys


@dataclass(frozen=True)
class ExponentTerm:
    """weight * min{v(atom) : atom in atoms}; weight is linear in the parameters."""

    weight: tuple[tuple[str, int], ...]
    atoms: tuple[str, ...]

    def weight_at(self, params: dict[str, int]) -> int:
        return sum(c * params[name] for name, c in self.weight)


@dataclass(frozen=True)
class IntegrandSpec:
    label: str
    dimension: int
    groups: tuple[CoordinateGroup, ...]
    exponent: tuple[ExponentTerm, ...]
    measure_power: int = 0  # constant factor (1 - q^-1)^measure_power

    def __post_init__(self):
        if self.dimension != sum(len(g.names) for g in self.groups):
            raise ValueError(f"{self.label}: dimension does not match the domain product")
        labels = [lab for g in self.groups for lab, _ in g.atoms]
        if len(set(labels)) != len(labels):
            raise ValueError("atom labels must be unique")
        for term in self.exponent:
            missing = set(term.atoms) - set(labels)
            if missing:
                raise ValueError(f"unknown atoms {sorted(missing)}")

    def cell_count(self, p: int, N: int) -> int:
        return sum(math.prod(len(d.residues(p, N)) for d in g.domains) for g in self.groups)


@dataclass(frozen=True)
class OracleResult:
    lower: Fraction
    upper: Fraction
    resolved_measure: Fraction
    cells: int
    q: int
    level: int

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


def _eval_mod(poly: LaurentPoly, coords: list[np.ndarray], M: int) -> np.ndarray:
    size = coords[0].shape[0]
    acc = np.zeros(size, dtype=np.int64)
    for exps, c in poly.terms.items():
        term = np.full(size, c % M, dtype=np.int64)
        for x, e in zip(coords, exps):
            for _ in range(e):
                term = (term * x) % M
        acc = (acc + term) % M
    return acc


def _capped_valuation(values: np.ndarray, p: int, N: int) -> np.ndarray:
    v = np.zeros(values.shape, dtype=np.int64)
    for k in range(1, N + 1):
        v += (values % p**k == 0).astype(np.int64)
    return v


def _group_histogram(group: CoordinateGroup, p: int, N: int, workers: int | None) -> dict[tuple[int, ...], int]:
    M = p**N
    residues = [d.residues(p, N) for d in group.domains]
    polys = group.atom_polys()
    lens = [len(r) for r in residues]
    split = next(j for j in range(len(lens) + 1) if math.prod(lens[j:]) <= CHUNK_CELLS)
    radix = N + 1

    def run(prefix: tuple[int, ...]) -> np.ndarray:
        tail = residues[split:]
        if tail:
            grids = np.meshgrid(*tail, indexing="ij")
            tail_cols = [g.ravel() for g in grids]
            size = tail_cols[0].shape[0]
        else:
            tail_cols, size = [], 1
        coords = [np.full(size, x, dtype=np.int64) for x in prefix] + tail_cols
        key = np.zeros(size, dtype=np.int64)
        for poly in polys:
            key = key * radix + _capped_valuation(_eval_mod(poly, coords, M), p, N)
        return np.bincount(key, minlength=radix ** len(polys))

    prefixes = list(itertools.product(*(r.tolist() for r in residues[:split])))
    counts = reduce(np.add, ordered_map(run, prefixes, workers))
    hist = {}
    for key in np.nonzero(counts)[0]:
        digits = []
        k = int(key)
        for _ in polys:
            digits.append(k % radix)
            k //= radix
        hist[tuple(reversed(digits))] = int(counts[key])
    return hist


def oracle_residue_enum(
    spec: IntegrandSpec,
    q: int,
    level: int,
    params: dict[str, int],
    budget: int = DEFAULT_BUDGET,
    workers: int | None = None,
) -> OracleResult:
    """Interval [lower, upper] containing the integral described by `spec`."""
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise ValueError(f"q={q} must be prime")
    N = level
    if N < 1 or q ** (2 * N) >= 2**62:
        raise TractabilityError(f"level {N} is out of range for q={q}")
    cells = spec.cell_count(q, N)
    if cells > budget:
        raise TractabilityError(f"{cells} residue cells exceed the budget {budget}")
    weights = [t.weight_at(params) for t in spec.exponent]
    if any(w < 0 for w in weights):
        raise ValueError("exponent weights must be nonnegative")

    hists = [_group_histogram(g, q, N, workers) for g in spec.groups]
    labels = [[lab for lab, _ in g.atoms] for g in spec.groups]
    cell_measure = Fraction(1, q ** (N * spec.dimension))
    qf = Fraction(q)
    lower = upper = resolved = Fraction(0)
    for combo in itertools.product(*(h.items() for h in hists)):
        vals: dict[str, int] = {}
        count = 1
        for names, (key, c) in zip(labels, combo):
            vals.update(zip(names, key))
            count *= c
        e_low, e_high, finite = 0, 0, True
        for w, term in zip(weights, spec.exponent):
            if not w:
                continue
            m_cap = min(vals[a] for a in term.atoms)
            exact = [vals[a] for a in term.atoms if vals[a] < N]
            e_high += w * m_cap
            if exact:
                e_low += w * min(exact)
            else:
                finite = False
        mass = count * cell_measure
        upper += mass / qf**e_high
        if finite:
            lower += mass / qf**e_low
            if e_low == e_high:
                resolved += mass
    factor = (1 - 1 / qf) ** spec.measure_power
    return OracleResult(lower * factor, upper * factor, resolved, cells, q, N)


# Integrands of the building blocks, written with f = y11 y22 - y12 y21.

_Y = ("y11", "y12", "y21", "y22")
_DET = ("f", "y11*y22-y12*y21")


def _x_group(domain: Domain = P) -> CoordinateGroup:
    return CoordinateGroup(("x",), (domain,), (("x", "x"),))


def _y_group(domains: tuple[Domain, ...]) -> CoordinateGroup:
    return CoordinateGroup(_Y, domains, (_DET,))


_TAU_X = ExponentTerm((("tau", 1),), ("x",))
_RHO_FX = ExponentTerm((("rho", 2),), ("f", "x"))


def _id1_block(label: str, y_domains: tuple[Domain, ...], x_domain: Domain = P, measure: int = 1) -> IntegrandSpec:
    return IntegrandSpec(label, 5, (_x_group(x_domain), _y_group(y_domains)), (_TAU_X, _RHO_FX), measure)


TARGETS: dict[str, IntegrandSpec] = {
    "lemma23": IntegrandSpec(
        "lemma23",
        2,
        (_x_group(), CoordinateGroup(("y",), (P,), (("y", "y"),))),
        (_TAU_X, ExponentTerm((("rho", 1),), ("x", "y"))),
    ),
    "lemma24": IntegrandSpec(
        "lemma24",
        3,
        (_x_group(), CoordinateGroup(("y", "z"), (P, P), (("yz", "y*z"),))),
        (_TAU_X, ExponentTerm((("rho", 1),), ("x", "yz"))),
    ),
    # z = identity matrix: f(z) is a unit.
    "ID1z.generic": _id1_block("ID1z.generic", (coset(1), coset(0), coset(0), coset(1))),
    # z = E11: f(z) = 0 but z is nonzero mod p.
    "ID1z.smooth": _id1_block("ID1z.smooth", (coset(1), coset(0), coset(0), coset(0))),
    "ID1z.origin": _id1_block("ID1z.origin", (P, P, P, P)),
    "J1": _id1_block("J1", (P, P, P, P), x_domain=P_MINUS_P2, measure=0),
    "J2": _id1_block("J2", (P, P, P, P), x_domain=P2, measure=0),
    "igusa_det2": IntegrandSpec("igusa_det2", 4, (_y_group((O, O, O, O)),), (ExponentTerm((("tau", 1),), ("f",)),)),
}


def target_value(label: str, q: int, tau: int, rho: int) -> Fraction:
    """Closed-form value of a named target at a = 1/q, b = q^-tau and C as the target dictates."""
    from .cases import id1_case_value, j_integrals, assemble_ID1, lattice_integral
    from .reference import QT, display

    qf = Fraction(q)
    if label == "igusa_det2":
        return display("igusa.det2").evaluate({"q": qf, "t": qf**-tau})
    if label in ("lemma23", "lemma24"):
        # the lemmas are stated with C = q^-t for their second exponent t = rho
        point = {"a": 1 / qf, "b": qf**-tau, "C": qf**-rho}
        return lattice_integral(label).evaluate(point)
    point = {"a": 1 / qf, "b": qf**-tau, "C": qf ** (-2 * rho)}
    blocks = {
        "ID1z.generic": "ID1.case1.m1n1",
        "ID1z.smooth": "ID1.case2.m1n1",
        "ID1z.origin": "ID1.case3.m1n1",
    }
    if label in blocks:
        return id1_case_value(blocks[label]).evaluate(point)
    if label in ("J1", "J2"):
        j = dict(zip(("J1", "J2"), j_integrals()))[label]
        return j.total(assemble_ID1("m1n1")).evaluate(point)
    raise KeyError(f"unknown oracle target {label!r}")
