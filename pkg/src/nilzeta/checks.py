"""Named verification checks shared by the CLI and the acceptance tests.

Each target maps to a function ``(config) -> list[CheckResult]``.  Budgets
come from the config dictionary so every size can be overridden.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import analytic, counting, coxeter, matforms, symsum
from .algebra import LaurentPoly, parse_poly
from .integrals import cases, oracle, reference, zeta

DEFAULTS: dict[str, Any] = {
    "seed": 0,
    "threads": None,
    "identity_level": 40,
    "identity_points": 3,
    "lemma_oracle_q": 2,
    "lemma_oracle_level": 12,
    "lemma_oracle_params": [2, 2],
    "igusa_q": 2,
    "igusa_level": 6,
    "igusa_s": 1,
    "block_oracle_q": 2,
    "block_oracle_level": 6,
    "block_oracle_params": [1, 1],
    "oracle_budget": oracle.DEFAULT_BUDGET,
    "lemma21_max_sum": 5,
    "count_q": [2, 3, 5, 7],
    "gl2_q": [2, 3, 4, 5, 7, 8, 9, 11, 13],
    "series_q": [2, 3, 5],
    "series_order": 8,
}


@dataclass
class CheckResult:
    check: str
    target: str
    status: str
    expected: str
    actual: str
    budget: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json_obj(self) -> dict:
        return asdict(self)


def _result(check: str, target: str, ok: bool, expected, actual, **budget) -> CheckResult:
    return CheckResult(check, target, "PASS" if ok else "FAIL", str(expected), str(actual), budget)


def merged_config(overrides: dict | None = None) -> dict:
    cfg = dict(DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in DEFAULTS:
            raise KeyError(f"unknown config key {key!r}")
        cfg[key] = value
    return cfg


def _interval(r: oracle.OracleResult) -> str:
    return f"[{float(r.lower):.12g}, {float(r.upper):.12g}]"


# local zeta functions


def check_theorems(cfg: dict) -> list[CheckResult]:
    out = []
    for case in cases.CASES:
        z = zeta.local_zeta(case)
        published = reference.display(f"theorem.{case}")
        ok = z.to_rational().equals(published) and z.equals(zeta.published_zeta(case))
        out.append(_result(f"zeta.{case}", "theorem", ok, published, z.format("text")))
    return out


def _computed(label: str):
    if label in ("lemma23", "lemma24") or label.startswith("subcase"):
        return cases.lattice_integral(label)
    case = label.rsplit(".", 1)[-1]
    if label.startswith("ID1.case"):
        return next(c.value for c in cases.id1_cases(case) if c.label == label)
    if label.startswith("ID2.case"):
        return next(c.value for c in cases.id2_cases(case) if c.label == label)
    if label == "J1.m1n1":
        return cases.j_integrals()[0].value
    if label.startswith("ID1."):
        return cases.assemble_ID1(case)
    if label.startswith("ID2."):
        return cases.assemble_ID2(case)
    if label.startswith("Z."):
        return cases.assemble_Z(case)
    return None


INTERMEDIATE_LABELS = tuple(
    label
    for label in reference.DISPLAYS
    if not label.startswith(("identity", "theorem", "igusa"))
)


def check_intermediates(cfg: dict) -> list[CheckResult]:
    out = []
    for label in INTERMEDIATE_LABELS:
        value = _computed(label)
        if label == "ID2.m1n1":
            expected = reference.display_in_terms_of_id1(label, cases.assemble_ID1("m1n1"))
        else:
            expected = reference.display(label)
        out.append(_result(label, "intermediates", value.equals(expected), expected, value))
    return out


# lattice sums and p-adic integrals


def random_points(symbols, count: int, seed: int) -> list[dict[str, Fraction]]:
    """Rational points with every coordinate in (0, 1), reproducible from the seed."""
    rng = random.Random(seed)
    return [{s: Fraction(rng.randint(1, 9), rng.randint(10, 19)) for s in symbols} for _ in range(count)]


def check_identities(cfg: dict) -> list[CheckResult]:
    out = []
    N = cfg["identity_level"]
    for which in (1, 2, 3):
        spec = symsum.lattice_identity_spec(which)
        closed = symsum.evaluate(spec)
        published = reference.display(f"identity{which}")
        out.append(_result(f"identity{which}.closed_form", "identities", closed.equals(published), published, closed))
        points = random_points(spec.symbols, cfg["identity_points"], cfg["seed"] + which)
        for k, point in enumerate(points):
            partial, tail = symsum.truncated_sum(spec, point, N)
            exact = closed.evaluate(point)
            err = abs(exact - partial)
            out.append(
                _result(
                    f"identity{which}.truncation{k}",
                    "identities",
                    err <= tail,
                    f"|error| <= {float(tail):.3e}",
                    f"|error| = {float(err):.3e}",
                    N=N,
                )
            )
    return out


def _oracle_check(label: str, q: int, level: int, tau: int, rho: int, cfg: dict, target: str) -> CheckResult:
    spec = oracle.TARGETS[label]
    params = {"tau": tau, "rho": rho}
    r = oracle.oracle_residue_enum(spec, q, level, params, budget=cfg["oracle_budget"], workers=cfg["threads"])
    value = oracle.target_value(label, q, tau, rho)
    return _result(
        f"oracle.{label}", target, r.contains(value), f"{float(value):.12g}", _interval(r),
        q=q, level=level, tau=tau, rho=rho, cells=r.cells,
    )


def check_lemmas(cfg: dict) -> list[CheckResult]:
    out = []
    tau, rho = cfg["lemma_oracle_params"]
    for label in ("lemma23", "lemma24"):
        closed = cases.lattice_integral(label)
        published = reference.display(label)
        out.append(_result(f"{label}.closed_form", "lemmas", closed.equals(published), published, closed))
        out.append(_oracle_check(label, cfg["lemma_oracle_q"], cfg["lemma_oracle_level"], tau, rho, cfg, "lemmas"))
    return out


def check_blocks(cfg: dict) -> list[CheckResult]:
    tau, rho = cfg["block_oracle_params"]
    labels = ("ID1z.generic", "ID1z.smooth", "ID1z.origin", "J1", "J2")
    return [
        _oracle_check(label, cfg["block_oracle_q"], cfg["block_oracle_level"], tau, rho, cfg, "blocks")
        for label in labels
    ]


def check_igusa(cfg: dict) -> list[CheckResult]:
    return [_oracle_check("igusa_det2", cfg["igusa_q"], cfg["igusa_level"], cfg["igusa_s"], 0, cfg, "igusa")]


# algebra, counting, Coxeter groups


def lemma21_pairs(max_sum: int) -> list[tuple[int, int]]:
    return [(m, n) for n in range(1, max_sum) for m in range(n, max_sum - n + 1)]


def check_lemma21(cfg: dict, pairs: list[tuple[int, int]] | None = None) -> list[CheckResult]:
    out = []
    for m, n in pairs or lemma21_pairs(cfg["lemma21_max_sum"]):
        ok = matforms.check_lemma21(m, n)
        out.append(_result(f"lemma21.m{m}n{n}", "lemma21", ok, "Pf(R) = (-1)^n Y^(m-n) Pf(Y^T J Y)", "holds" if ok else "fails"))
    return out


def check_counts(cfg: dict) -> list[CheckResult]:
    out = []
    jobs = [(v, q) for v in ("v3", "v2") for q in cfg["count_q"]] + [("gl2", q) for q in cfg["gl2_q"]]
    for variety, q in jobs:
        counted = counting.COUNTERS[variety](q, workers=cfg["threads"])
        expected = counting.closed_form_value(variety, q)
        out.append(_result(f"count.{variety}.q{q}", "counts", counted == expected, expected, counted))
    return out


def _x_poly(text: str) -> LaurentPoly:
    return parse_poly(text, coxeter.X_TABLE)


def check_coxeter(cfg: dict) -> list[CheckResult]:
    out = []
    for which in ("cox1", "cox2"):
        ok = coxeter.check_cox_identity(which)
        out.append(_result(which, "coxeter", ok, "identity holds", "holds" if ok else "fails"))
    cox1 = coxeter.cox1_data()
    out.append(_result("cox1.sum", "coxeter", cox1["sum"] == cox1["target"], cox1["target"], cox1["sum"]))
    expected = {(): "1", (0,): "1+X+X^2+X^3", (1,): "1+X+X^2+X^3", (0, 1): "1+2X+2X^2+2X^3+X^4"}
    for I, text in expected.items():
        got = coxeter.f_poly(2, I).poly
        out.append(_result(f"f_2{{{','.join(map(str, I))}}}", "coxeter", got == _x_poly(text), _x_poly(text), got))
    poincare = coxeter.poincare_polynomial(2)
    want = _x_poly("1+2X+2X^2+2X^3+X^4")
    out.append(_result("poincare.B2", "coxeter", poincare == want, want, poincare))
    return out


# analytic invariants

TOPOLOGICAL = {
    "m1n1": "s(s-2)/((s-3)(s-4))",
    "m2n1": "2s(s-2)(s^2-5s+5)/((s-5)(2s-5)(s-4)^2)",
}
COX_CONTRIBUTIONS = {"cox1": "2s(s-2)(s^2-5s+5)/(s-4)^2", "cox2": "(s-2)/(s-3)"}


def check_topological(cfg: dict) -> list[CheckResult]:
    out = []
    for case, text in TOPOLOGICAL.items():
        want = analytic.SVariableRational.parse(text)
        got = analytic.topological_zeta(zeta.local_zeta(case))
        out.append(_result(f"topological.{case}", "topo", got == want, want, got))
    for which, text in COX_CONTRIBUTIONS.items():
        want = analytic.SVariableRational.parse(text)
        got = analytic.cox_contribution(which)
        out.append(_result(f"topological.{which}", "topo", got == want, want, got))
    return out


def check_analytics(cfg: dict) -> list[CheckResult]:
    out = []
    for case, want in (("m1n1", Fraction(5)), ("m2n1", Fraction(6))):
        got = zeta.euler_abscissa(zeta.local_zeta(case))
        out.append(_result(f"abscissa.{case}", "analytics", got == want, want, got))
    beta = zeta.beta_invariant(coxeter.exceptional_numerator())
    out.append(_result("beta.E", "analytics", beta == Fraction(7, 2), "7/2", beta))
    boundary = analytic.continuation_boundary("m2n1").boundary
    out.append(_result("boundary.m2n1", "analytics", boundary == Fraction(7, 2), "7/2", boundary))
    return out


def check_positivity(cfg: dict) -> list[CheckResult]:
    out = []
    K = cfg["series_order"]
    for case, q in itertools.product(cases.CASES, cfg["series_q"]):
        coeffs = zeta.series_coefficients(zeta.local_zeta(case), q, K)
        ok = coeffs[0] == 1 and all(c.denominator == 1 and c >= 0 for c in coeffs)
        shown = ", ".join(str(c) for c in coeffs)
        out.append(_result(f"series.{case}.q{q}", "positivity", ok, "nonnegative integers, leading 1", shown, K=K))
    return out


CHECKS: dict[str, Callable[[dict], list[CheckResult]]] = {
    "theorem": check_theorems,
    "intermediates": check_intermediates,
    "identities": check_identities,
    "lemmas": check_lemmas,
    "lemma21": check_lemma21,
    "counts": check_counts,
    "coxeter": check_coxeter,
    "topo": check_topological,
    "analytics": check_analytics,
    "positivity": check_positivity,
    "igusa": check_igusa,
    "blocks": check_blocks,
}


def run_checks(targets, cfg: dict | None = None) -> list[CheckResult]:
    cfg = merged_config(cfg)
    results: list[CheckResult] = []
    for name in targets:
        results.extend(CHECKS[name](cfg))
    return results
