"""Degreewise linear systems for logarithmic derivations.

Two formulations are provided.

``ambient_system`` is the direct one: unknowns are the coefficients of
(p_1, ..., p_l) and each hyperplane contributes the coefficients of
theta(alpha) reduced modulo alpha.

``EssentialEngine`` works on the essentialization and uses a smaller
parametrization.  Fix independent forms lambda_1..lambda_r among the
hyperplanes; every theta in D(A) satisfies theta(lambda_k) = lambda_k g_k,
and theta is determined by (g_1, ..., g_r).  Only the remaining hyperplanes
give constraints.  Multiplication of theta by a monomial multiplies every g_k
by it, so module images are plain monomial shifts of g-vectors.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from .arrangement import Arrangement, essentialize
from .exactmath import MultiPoly, invert, monomials
from .sparse import Echelon, SparseRow, int_rank

Exponent = tuple[int, ...]


def integer_form(coeffs: Sequence) -> list[int]:
    fr = [Fraction(c) for c in coeffs]
    den = lcm(*(c.denominator for c in fr)) if fr else 1
    ints = [int(c * den) for c in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


class ModFormReducer:
    """Integer-scaled normal forms of monomials in S / (alpha).

    The pivot is the largest variable index with nonzero coefficient ``a_p``.
    For a monomial of degree ``d`` the result is ``a_p**d`` times its normal
    form, which keeps everything integral; the common factor is harmless in
    homogeneous linear systems.
    """

    def __init__(self, alpha: Sequence[int]):
        self.alpha = list(alpha)
        self.nvars = len(alpha)
        self.pivot = max(j for j, c in enumerate(alpha) if c)
        self.ap = alpha[self.pivot]
        neg = {}
        for j, c in enumerate(alpha):
            if c and j != self.pivot:
                e = [0] * self.nvars
                e[j] = 1
                neg[tuple(e)] = -c
        self._neg = neg
        self._powers: list[dict[Exponent, int]] = [{(0,) * self.nvars: 1}]
        self._memo: dict[Exponent, dict[Exponent, int]] = {}

    def _power(self, k: int) -> dict[Exponent, int]:
        while len(self._powers) <= k:
            prev = self._powers[-1]
            nxt: dict[Exponent, int] = {}
            for e1, c1 in prev.items():
                for e2, c2 in self._neg.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    nxt[e] = nxt.get(e, 0) + c1 * c2
            self._powers.append({e: c for e, c in nxt.items() if c})
        return self._powers[k]

    def reduce(self, exp: Exponent) -> dict[Exponent, int]:
        hit = self._memo.get(exp)
        if hit is not None:
            return hit
        p = self.pivot
        k = exp[p]
        deg = sum(exp)
        scale = self.ap ** (deg - k)
        rest = list(exp)
        rest[p] = 0
        out = {}
        for e, c in self._power(k).items():
            out[tuple(a + b for a, b in zip(e, rest))] = c * scale
        self._memo[exp] = out
        return out

    def reduce_poly(self, terms: dict[Exponent, int]) -> dict[Exponent, int]:
        out: dict[Exponent, int] = {}
        for e, c in terms.items():
            for e2, c2 in self.reduce(e).items():
                out[e2] = out.get(e2, 0) + c * c2
        return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict[Exponent, int]:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def _add_unit(m: Exponent, j: int) -> Exponent:
    return m[:j] + (m[j] + 1,) + m[j + 1:]


def ambient_system(a: Arrangement, d: int) -> tuple[list[SparseRow], int]:
    """Constraint rows for D(A)_d with unknowns (p_1..p_l) in the full space."""
    ell = a.ambient_dim
    mons = monomials(ell, d)
    n = len(mons)
    rows: list[SparseRow] = []
    for h in a:
        alpha = integer_form(h.coeffs)
        red = ModFormReducer(alpha)
        acc: dict[Exponent, SparseRow] = {}
        for j, cj in enumerate(alpha):
            if not cj:
                continue
            for mi, m in enumerate(mons):
                col = j * n + mi
                for e, c in red.reduce(m).items():
                    row = acc.setdefault(e, {})
                    row[col] = row.get(col, 0) + cj * c
        for e in sorted(acc):
            row = {k: v for k, v in acc[e].items() if v}
            if row:
                rows.append(row)
    return rows, ell * n


def ambient_vector_to_coeffs(vec: Sequence, ell: int, d: int) -> list[MultiPoly]:
    mons = monomials(ell, d)
    n = len(mons)
    out = []
    for j in range(ell):
        terms = {mons[i]: vec[j * n + i] for i in range(n) if vec[j * n + i]}
        out.append(MultiPoly(ell, terms))
    return out


def coeffs_to_ambient_vector(coeffs: Sequence[MultiPoly], d: int) -> SparseRow:
    ell = len(coeffs)
    idx = monomial_index(ell, d)
    n = len(idx)
    out: SparseRow = {}
    for j, p in enumerate(coeffs):
        for e, c in p.terms.items():
            out[j * n + idx[e]] = c
    return out


def _gcd_normalize(vals: list) -> list:
    """Scale a rational vector to a primitive integer vector, first nonzero positive."""
    fr = [Fraction(v) for v in vals]
    den = lcm(*(v.denominator for v in fr if v)) if any(fr) else 1
    ints = [int(v * den) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    lead = next((v for v in ints if v), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return ints


def normalize_coeffs(coeffs: Sequence[MultiPoly]) -> list[MultiPoly]:
    """Rescale a derivation so its coefficients are primitive integers."""
    flat = []
    for p in coeffs:
        flat.extend(p.terms[e] for e in sorted(p.terms, reverse=True))
    if not flat:
        return list(coeffs)
    ints = _gcd_normalize(flat)
    factor = Fraction(ints[0]) / flat[0]
    return [p.scale(factor) for p in coeffs]


class EssentialEngine:
    """Graded pieces of D(A) for the essentialization of ``a``."""

    def __init__(self, a: Arrangement):
        self.arrangement = a
        self.ess = essentialize(a)
        red = self.ess.reduced
        self.rank = red.ambient_dim
        r = self.rank
        self.forms = [integer_form(h.coeffs) for h in red]
        # basis forms: greedy, first independent ones in input order
        basis: list[int] = []
        for i in range(len(self.forms)):
            trial = [self.forms[j] for j in basis + [i]]
            if int_rank([dict(enumerate(f)) for f in trial], r) == len(trial):
                basis.append(i)
            if len(basis) == r:
                break
        self.basis = basis
        self.M = [[Fraction(v) for v in self.forms[i]] for i in basis]
        self.Minv = invert(self.M) if r else []
        # each other form as an integer combination of the basis forms
        self.relations = []
        for i, f in enumerate(self.forms):
            if i in basis:
                continue
            comb = [sum(Fraction(f[j]) * self.Minv[j][k] for j in range(r)) for k in range(r)]
            self.relations.append((i, integer_form(comb), ModFormReducer(f)))

    # unknowns at degree d: g_k in S_{d-1}, column k*N + index(monomial)
    def ncols(self, d: int) -> int:
        return self.rank * len(monomials(self.rank, d - 1)) if d >= 1 else 0

    def system(self, d: int) -> list[SparseRow]:
        r = self.rank
        if d < 1 or r == 0:
            return []
        mons = monomials(r, d - 1)
        n = len(mons)
        rows: list[SparseRow] = []
        for _, comb, red in self.relations:
            acc: dict[Exponent, SparseRow] = {}
            for k, ck in enumerate(comb):
                if not ck:
                    continue
                lam = self.forms[self.basis[k]]
                for mi, m in enumerate(mons):
                    col = k * n + mi
                    for j, lj in enumerate(lam):
                        if not lj:
                            continue
                        for e, c in red.reduce(_add_unit(m, j)).items():
                            row = acc.setdefault(e, {})
                            row[col] = row.get(col, 0) + ck * lj * c
            for e in sorted(acc):
                row = {k: v for k, v in acc[e].items() if v}
                if row:
                    rows.append(row)
        return rows

    def shift(self, gvec: Sequence[dict], u: Exponent, d: int) -> SparseRow:
        """Column vector of x^u * theta at degree d, theta given by its g-polys."""
        idx = monomial_index(self.rank, d - 1)
        n = len(idx)
        out: SparseRow = {}
        for k, poly in enumerate(gvec):
            for e, c in poly.items():
                out[k * n + idx[tuple(a + b for a, b in zip(e, u))]] = c
        return out

    def column_to_g(self, vec: Sequence[int], d: int) -> list[dict]:
        mons = monomials(self.rank, d - 1)
        n = len(mons)
        return [
            {mons[i]: vec[k * n + i] for i in range(n) if vec[k * n + i]}
            for k in range(self.rank)
        ]

    def image(self, gens: Sequence[tuple[int, list[dict]]], d: int, skip: int | None = None) -> list[SparseRow]:
        """Degree-d part of the submodule generated by ``gens`` (degree, g-vector)."""
        out = []
        for i, (e, g) in enumerate(gens):
            if i == skip or e > d:
                continue
            for u in monomials(self.rank, d - e):
                out.append(self.shift(g, u, d))
        return out

    def reduced_coeffs(self, gvec: Sequence[dict]) -> list[MultiPoly]:
        """theta(y_1..y_r) in essential coordinates."""
        r = self.rank
        q = []
        for k, poly in enumerate(gvec):
            lam = MultiPoly.linear(self.forms[self.basis[k]])
            q.append(lam * MultiPoly(r, poly))
        return [
            sum((q[k].scale(self.Minv[j][k]) for k in range(r) if self.Minv[j][k]), MultiPoly.zero(r))
            for j in range(r)
        ]

    def lift(self, gvec: Sequence[dict]) -> list[MultiPoly]:
        """Ambient coefficients: theta(x_{pivot_k}) = p_k(Rx), zero elsewhere."""
        ell = self.arrangement.ambient_dim
        images = [MultiPoly.linear(row) for row in self.ess.rows]
        out = [MultiPoly.zero(ell) for _ in range(ell)]
        for k, p in enumerate(self.reduced_coeffs(gvec)):
            out[self.ess.pivots[k]] = p.substitute(images)
        return normalize_coeffs(out)

    def center_coeffs(self) -> list[list[MultiPoly]]:
        ell = self.arrangement.ambient_dim
        out = []
        for v in self.ess.center_basis():
            out.append(normalize_coeffs([MultiPoly.constant(ell, c) for c in v]))
        return out


def select_new(engine: EssentialEngine, d: int, old: list[SparseRow], expected: int,
               rows: list[SparseRow] | None = None) -> list[list[int]]:
    """Kernel vectors completing span(old) to the full degree-d kernel.

    Kernel vectors are indexed by the free columns of the constraint echelon
    form; a kernel element is determined by its free coordinates, so the
    completion is read off from the echelon form of ``old`` restricted there.
    """
    ncols = engine.ncols(d)
    if rows is None:
        rows = engine.system(d)
    ech = Echelon(rows, ncols)
    free = ech.free
    pos = {f: i for i, f in enumerate(free)}
    proj = []
    for v in old:
        pv = {pos[c]: x for c, x in v.items() if c in pos}
        if pv:
            proj.append(pv)
    taken = set(Echelon(proj, len(free)).pivots) if proj else set()
    chosen = [free[i] for i in range(len(free)) if i not in taken]
    if len(chosen) != expected:
        raise ArithmeticError(f"degree {d}: expected {expected} new generators, found {len(chosen)}")
    return [ech.kernel_vector(f) for f in chosen]
