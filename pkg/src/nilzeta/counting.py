"""Exhaustive point counts over small finite fields.

Counted varieties, in coordinates y_rc of a generic 4 x 2 matrix:

* V3: h = m12 + m34 = 0 in F_q^8;
* V2: all six 2 x 2 minors m_rs vanish (rank <= 1);
* GL2: 2 x 2 matrices with nonzero determinant.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import LaurentPoly, VarTable
from .parallel import ordered_map

MAX_Q_RANK_VARIETIES = 9
MAX_Q_GL2 = 47
CHUNK_POINTS = 1 << 21


class TractabilityError(RuntimeError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, n = 0, q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    k = len(modulus) - 1
    out = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    # reduce by the monic modulus
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for i in range(k + 1):
                out[d - k + i] = (out[d - k + i] - c * modulus[i]) % p
    return out[:k]


def _irreducible(p: int, k: int) -> list[int]:
    """Monic degree-k polynomial over F_p with no roots/factors, lowest coefficient first."""
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        if k <= 3:
            if all(sum(c * x**i for i, c in enumerate(f)) % p for x in range(p)):
                return f
        else:
            # degree 4 needs no quadratic factor either
            roots = any(sum(c * x**i for i, c in enumerate(f)) % p == 0 for x in range(p))
            if roots:
                continue
            quad = False
            for b, c in itertools.product(range(p), repeat=2):
                g = [c, b, 1]
                rem = list(f)
                for d in range(len(rem) - 1, 1, -1):
                    lead = rem[d]
                    if lead:
                        for i in range(3):
                            rem[d - 2 + i] = (rem[d - 2 + i] - lead * g[i]) % p
                if not any(rem[:2]):
                    quad = True
                    break
            if not quad:
                return f
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class PrimePowerField:
    """F_q with elements 0..q-1 and full addition/multiplication tables."""

    def __init__(self, q: int):
        p, k = _prime_power(q)
        self.q, self.p, self.k = q, p, k
        if k == 1:
            idx = np.arange(q)
            self.add = (idx[:, None] + idx[None, :]) % q
            self.mul = (idx[:, None] * idx[None, :]) % q
        else:
            modulus = _irreducible(p, k)
            digits = [[(x // p**i) % p for i in range(k)] for x in range(q)]
            encode = lambda v: sum(c * p**i for i, c in enumerate(v))  # noqa: E731
            self.add = np.array(
                [[encode([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q)] for x in range(q)]
            )
            self.mul = np.array(
                [[encode(_poly_mulmod(digits[x], digits[y], modulus, p)) for y in range(q)] for x in range(q)]
            )
        self.neg = np.array([int(np.flatnonzero(self.add[x] == 0)[0]) for x in range(q)])
        self.sub = self.add[:, self.neg]

    def check_axioms(self) -> bool:
        q = self.q
        add, mul = self.add, self.mul
        idx = np.arange(q)
        if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
            return False
        if not (np.array_equal(add[0], idx) and np.array_equal(mul[1], idx)):
            return False
        if any(sorted(mul[x]) != list(range(q)) for x in range(1, q)):
            return False
        assoc_add = add[add[:, :, None], idx[None, None, :]] == add[idx[:, None, None], add[None, :, :]]
        assoc_mul = mul[mul[:, :, None], idx[None, None, :]] == mul[idx[:, None, None], mul[None, :, :]]
        dist = mul[idx[:, None, None], add[None, :, :]] == add[mul[:, :, None], mul[:, None, :]]
        return bool(assoc_add.all() and assoc_mul.all() and dist.all())


def _quad_points(q: int) -> np.ndarray:
    """All of F_q^4 as a (q^4, 4) array in row-major order."""
    grid = np.indices((q,) * 4).reshape(4, -1).T
    return grid.astype(np.int64)


def _minor(F: PrimePowerField, r, s):
    """r1*s2 - r2*s1 for row arrays r = (r1, r2), s = (s1, s2)."""
    return F.sub[F.mul[r[0], s[1]], F.mul[r[1], s[0]]]


def _check_rank_q(q: int) -> PrimePowerField:
    if q > MAX_Q_RANK_VARIETIES:
        raise TractabilityError(f"q={q}: exhaustive search over F_q^8 is limited to q <= {MAX_Q_RANK_VARIETIES}")
    return PrimePowerField(q)


def _blocks(n: int, per_block: int) -> list[tuple[int, int]]:
    step = max(1, CHUNK_POINTS // per_block)
    return [(i, min(n, i + step)) for i in range(0, n, step)]


def count_V3(q: int, workers: int | None = None) -> int:
    """Number of zeros of h = m12 + m34 in F_q^8."""
    F = _check_rank_q(q)
    pts = _quad_points(q)
    # first half (y11, y12, y21, y22), second half (y31, y32, y41, y42)
    m_first = _minor(F, (pts[:, 0], pts[:, 1]), (pts[:, 2], pts[:, 3]))
    m_second = _minor(F, (pts[:, 0], pts[:, 1]), (pts[:, 2], pts[:, 3]))

    def block(bounds: tuple[int, int]) -> int:
        lo, hi = bounds
        h = F.add[m_first[lo:hi, None], m_second[None, :]]
        return int(np.count_nonzero(h == 0))

    return sum(ordered_map(block, _blocks(len(pts), len(pts)), workers))


def count_V2(q: int, workers: int | None = None, swap_columns: bool = False, check_in_V3: bool = True) -> int:
    """Number of rank <= 1 matrices in F_q^(4x2): all six minors vanish."""
    F = _check_rank_q(q)
    pts = _quad_points(q)
    if swap_columns:
        pts = pts[:, [1, 0, 3, 2]]
    top = ((pts[:, 0], pts[:, 1]), (pts[:, 2], pts[:, 3]))  # rows 1, 2
    m12 = _minor(F, *top)
    m34 = m12  # rows 3, 4 range over the same table

    def block(bounds: tuple[int, int]) -> int:
        lo, hi = bounds
        a, b = np.nonzero((m12[lo:hi, None] == 0) & (m34[None, :] == 0))
        a = a + lo
        rows = [
            (pts[a, 0], pts[a, 1]),
            (pts[a, 2], pts[a, 3]),
            (pts[b, 0], pts[b, 1]),
            (pts[b, 2], pts[b, 3]),
        ]
        alive = np.ones(len(a), dtype=bool)
        for r, s in ((0, 2), (0, 3), (1, 2), (1, 3)):
            idx = np.flatnonzero(alive)
            if not idx.size:
                break
            vals = _minor(F, tuple(x[idx] for x in rows[r]), tuple(x[idx] for x in rows[s]))
            alive[idx[vals != 0]] = False
        if check_in_V3:
            h = F.add[m12[a[alive]], m34[b[alive]]]
            if np.any(h != 0):
                raise AssertionError("a rank <= 1 point does not lie on h = 0")
        return int(np.count_nonzero(alive))

    return sum(ordered_map(block, _blocks(len(pts), len(pts)), workers))


def count_det_nonzero_2x2(q: int) -> int:
    """|GL_2(F_q)| by enumeration of F_q^4."""
    if q > MAX_Q_GL2:
        raise TractabilityError(f"q={q} exceeds {MAX_Q_GL2}")
    F = PrimePowerField(q)
    pts = _quad_points(q)
    det = _minor(F, (pts[:, 0], pts[:, 1]), (pts[:, 2], pts[:, 3]))
    return int(np.count_nonzero(det))


_Q = VarTable(["q"])


def closed_form(variety: str) -> LaurentPoly:
    """Point-count polynomial in q for 'v2', 'v3' or 'gl2'."""
    from .algebra import parse_poly

    forms = {
        "v2": "(q+1)(q^4-1)+1",
        "v3": "q^3(q^4+q-1)",
        "gl2": "q(q-1)^2(q+1)",
    }
    return parse_poly(forms[variety], _Q)


def closed_form_value(variety: str, q: int) -> int:
    return int(closed_form(variety).evaluate({"q": q}))


COUNTERS = {"v2": count_V2, "v3": count_V3, "gl2": lambda q, workers=None: count_det_nonzero_2x2(q)}
