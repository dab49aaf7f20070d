"""Solvable extensions, hypersolvable filtrations and the quadratic
Orlik-Solomon Poincare polynomial."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .arrangement import Arrangement
from .exactmath import rank
from .logder import DegreeSequence, InvariantError, degree_sequence
from .sparse import int_rank

IntPoly = list[int]


class BudgetExhausted(RuntimeError):
    pass


class _Ranks:
    """Memoized rank of index tuples of one arrangement."""

    def __init__(self, a: Arrangement):
        self.rows = a.rows()
        self._cache: dict[frozenset, int] = {}

    def __call__(self, *idx: int) -> int:
        key = frozenset(idx)
        r = self._cache.get(key)
        if r is None:
            r = rank([self.rows[i] for i in key]) if key else 0
            self._cache[key] = r
        return r


@dataclass(frozen=True)
class SolvabilityResult:
    solvable: bool
    condition: int | None = None
    witness: tuple[int, ...] = ()

    def __bool__(self):
        return self.solvable


def _solvable(ranks: _Ranks, inner: Sequence[int], outer: Sequence[int]) -> SolvabilityResult:
    inside = sorted(inner)
    comp = sorted(set(outer) - set(inner))
    # (1) two members of B and one outside element are independent
    for a in comp:
        for al, be in combinations(inside, 2):
            if ranks(al, be, a) != 3:
                return SolvabilityResult(False, 1, (al, be, a))
    # (2) every pair outside meets exactly on one member of B
    f = {}
    for a, b in combinations(comp, 2):
        hit = [al for al in inside if ranks(a, b, al) == 2]
        if not hit:
            return SolvabilityResult(False, 2, (a, b))
        f[(a, b)] = hit[0]
    # (3) f(a,b), f(a,c), f(b,c) are dependent
    for a, b, c in combinations(comp, 3):
        if ranks(f[(a, b)], f[(a, c)], f[(b, c)]) == 3:
            return SolvabilityResult(False, 3, (a, b, c))
    return SolvabilityResult(True)


def _indices(sub: Arrangement, a: Arrangement) -> list[int]:
    try:
        return [a.index(h) for h in sub]
    except KeyError:
        raise ValueError("first arrangement is not contained in the second") from None


def is_solvable_in(b: Arrangement, a: Arrangement) -> SolvabilityResult:
    """Check the three rank conditions for B inside A.

    Pairs and triples range over distinct elements of A minus B.
    Returned witnesses are hyperplane indices in ``a``.
    """
    return _solvable(_Ranks(a), _indices(b, a), range(len(a)))


@dataclass
class SolvableFiltration:
    arrangement: Arrangement
    chain: list[tuple[int, ...]]  # index sets A_1 .. A_k (A_0 empty is implicit)

    @property
    def steps(self) -> list[int]:
        out, prev = [], 0
        for level in self.chain:
            out.append(len(level) - prev)
            prev = len(level)
        return out

    @property
    def length(self) -> int:
        return len(self.chain)

    def level(self, i: int) -> Arrangement:
        if i == 0:
            return Arrangement(self.arrangement.ambient_dim, [])
        return self.arrangement.subarrangement(self.chain[i - 1])


@dataclass
class SearchResult:
    filtration: SolvableFiltration | None
    status: str  # found | not_hypersolvable | budget_exhausted
    nodes: int


def find_filtration(a: Arrangement, budget: int = 10**6, max_length: int | None = None,
                    reverse: bool = False) -> SearchResult:
    """Depth-first search for a solvable filtration.

    Next levels are tried by size descending, then by index tuples; ``reverse``
    flips the index order to obtain a second, usually different, filtration.
    """
    n = len(a)
    ranks = _Ranks(a)
    order = list(range(n))[::-1] if reverse else list(range(n))
    dead: set[tuple[frozenset, int]] = set()
    nodes = 0

    def extend(cur: tuple[int, ...], depth: int) -> list[tuple[int, ...]] | None:
        nonlocal nodes
        if len(cur) == n:
            return []
        if max_length is not None and depth >= max_length:
            return None
        key = (frozenset(cur), depth if max_length is not None else 0)
        if key in dead:
            return None
        rest = [i for i in order if i not in cur]
        for size in range(len(rest), 0, -1):
            for add in combinations(rest, size):
                nodes += 1
                if nodes > budget:
                    raise BudgetExhausted
                nxt = tuple(sorted(cur + add))
                if _solvable(ranks, cur, nxt):
                    tail = extend(nxt, depth + 1)
                    if tail is not None:
                        return [nxt] + tail
        dead.add(key)
        return None

    try:
        chain = extend((), 0)
    except BudgetExhausted:
        return SearchResult(None, "budget_exhausted", nodes)
    if chain is None:
        return SearchResult(None, "not_hypersolvable", nodes)
    return SearchResult(SolvableFiltration(a, chain), "found", nodes)


@dataclass(frozen=True)
class Hyperexponents:
    values: tuple[int, ...]

    @property
    def rho(self) -> int:
        return max(self.values) if self.values else 0


def hyperexponents(a: Arrangement, budget: int = 10**6) -> Hyperexponents:
    res = find_filtration(a, budget)
    if res.filtration is None:
        raise ValueError(f"no solvable filtration ({res.status})")
    values = tuple(sorted(res.filtration.steps))
    other = find_filtration(a, budget, reverse=True)
    if other.filtration is not None and tuple(sorted(other.filtration.steps)) != values:
        raise InvariantError("two filtrations give different hyperexponents")
    return Hyperexponents(values)


def product_poly(steps: Sequence[int]) -> IntPoly:
    out = [1]
    for b in steps:
        nxt = out + [0]
        for i, c in enumerate(out):
            nxt[i + 1] += b * c
        out = nxt
    return out


def _wedge(term: tuple[int, int], mono: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    i, j = term
    if i in mono or j in mono:
        return None
    # sign of moving e_i e_j into sorted position among mono
    inv = sum(1 for m in mono if m < i) + sum(1 for m in mono if m < j)
    return (-1) ** inv, tuple(sorted(mono + term))


def rank2_triples(a: Arrangement) -> list[tuple[int, int, int]]:
    ranks = _Ranks(a)
    return [t for t in combinations(range(len(a)), 3) if ranks(*t) == 2]


def quadratic_poincare(a: Arrangement, method: str = "direct", budget: int = 10**6) -> IntPoly:
    """Graded dimensions of the exterior algebra modulo the rank-2 quadratic relations."""
    if method == "filtration":
        res = find_filtration(a, budget)
        if res.filtration is None:
            raise ValueError(f"filtration method unavailable ({res.status})")
        return product_poly(res.filtration.steps)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    n = len(a)
    if n > 12:
        raise ValueError("direct method limited to 12 hyperplanes")
    rels = []
    for i, j, k in rank2_triples(a):
        rels.append({(j, k): 1, (i, k): -1, (i, j): 1})
    out = [1]
    for p in range(1, n + 1):
        total = comb(n, p)
        if p < 2 or not rels:
            out.append(total)
            continue
        idx = {m: c for c, m in enumerate(combinations(range(n), p))}
        rows = []
        for rel in rels:
            for mono in combinations(range(n), p - 2):
                row: dict[int, int] = {}
                for term, coef in rel.items():
                    hit = _wedge(term, mono)
                    if hit:
                        sign, m = hit
                        c = idx[m]
                        row[c] = row.get(c, 0) + sign * coef
                row = {c: v for c, v in row.items() if v}
                if row:
                    rows.append(row)
        dim = total - int_rank(rows, total)
        if dim == 0:
            break
        out.append(dim)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def supersolvable_exponents(a: Arrangement, budget: int = 10**6) -> tuple[int, ...] | None:
    res = find_filtration(a, budget, max_length=a.rank())
    if res.filtration is None or res.filtration.length != a.rank():
        return None
    return tuple(sorted(res.filtration.steps))


def restriction_identity(filt: SolvableFiltration) -> list[tuple[int, int, int, int]]:
    """(level, hyperplane index, |A_{i+1}^H|, |A_i|) for every H added at each step."""
    a = filt.arrangement
    out = []
    for i in range(filt.length):
        upper = filt.level(i + 1)
        lower = filt.level(i)
        for idx in sorted(set(filt.chain[i]) - set(filt.chain[i - 1] if i else ())):
            out.append((i, idx, upper.restriction_size(a[idx]), len(lower)))
    return out


@dataclass
class HypBoundReport:
    rho: int
    d_max: int
    d_max_deleted: int
    deleted: int
    slack: int
    slack_deleted: int


def check_hypbound(a: Arrangement, seq: DegreeSequence | None = None, budget: int = 10**6) -> HypBoundReport:
    res = find_filtration(a, budget)
    if res.filtration is None:
        raise ValueError(f"not hypersolvable ({res.status})")
    filt = res.filtration
    rho = max(filt.steps)
    top = sorted(set(filt.chain[-1]) - set(filt.chain[-2] if filt.length > 1 else ()))
    h = a[top[0]]
    seq = seq or degree_sequence(a)
    seq_del = degree_sequence(a.delete(h))
    if seq.truncated or seq_del.truncated:
        raise ValueError("degree sequence is truncated")
    rep = HypBoundReport(rho, seq.d_max, seq_del.d_max, top[0],
                         seq.d_max - (rho - 1), seq_del.d_max - (rho - 1))
    if rep.slack < 0 or rep.slack_deleted < 0:
        raise InvariantError(f"hyperexponent bound fails: {rep}")
    return rep
