"""Intersection lattice, Moebius function and characteristic polynomial."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement
from .exactmath import rref

IntPoly = list[int]  # coefficients, lowest degree first


@dataclass(frozen=True)
class Flat:
    equations: tuple[tuple[Fraction, ...], ...]
    members: tuple[int, ...]
    moebius: int = 0

    @property
    def codim(self) -> int:
        return len(self.equations)


def _in_rowspace(eqs: Sequence[Sequence[Fraction]], pivots: Sequence[int], v: Sequence[Fraction]) -> bool:
    v = list(v)
    for row, p in zip(eqs, pivots):
        c = v[p]
        if c:
            v = [a - c * b for a, b in zip(v, row)]
    return not any(v)


@dataclass
class Lattice:
    arrangement: Arrangement
    by_codim: list[list[Flat]] = field(default_factory=list)

    def flats(self) -> list[Flat]:
        return [f for level in self.by_codim for f in level]

    @property
    def rank(self) -> int:
        return len(self.by_codim) - 1

    def bottom(self) -> Flat:
        return self.by_codim[0][0]

    def level(self, k: int) -> list[Flat]:
        return self.by_codim[k] if k < len(self.by_codim) else []

    def codim2_flats(self) -> list[Flat]:
        return self.level(2)

    def flat_with(self, members) -> Flat:
        key = tuple(sorted(members))
        for f in self.flats():
            if f.members == key:
                return f
        raise KeyError(key)

    def moebius(self) -> dict[Flat, int]:
        return {f: f.moebius for f in self.flats()}

    def char_poly(self) -> IntPoly:
        ell = self.arrangement.ambient_dim
        coeffs = [0] * (ell + 1)
        for f in self.flats():
            coeffs[ell - f.codim] += f.moebius
        return coeffs

    def to_json(self) -> dict:
        return {
            "flats": [
                {"codim": f.codim, "members": list(f.members), "moebius": f.moebius}
                for f in self.flats()
            ]
        }


def build_lattice(a: Arrangement) -> Lattice:
    """Closure of the hyperplanes under intersection, deduplicated by member set.

    A flat is determined by the set of hyperplanes containing it, so the
    member tuple doubles as the canonical RREF signature.
    """
    ell = a.ambient_dim
    rows = a.rows()
    bottom = Flat((), (), 1)
    levels: list[list[Flat]] = [[bottom]]
    # (equations, pivots) cached per flat
    echelon = {(): ((), [])}
    while True:
        nxt: dict[tuple[int, ...], tuple] = {}
        for f in levels[-1]:
            eqs, piv = echelon[f.members]
            fset = set(f.members)
            for i, h in enumerate(rows):
                if i in fset:
                    continue
                red, newpiv = rref(list(eqs) + [h], ell)
                mem = tuple(
                    j for j in range(len(rows))
                    if j in fset or j == i or _in_rowspace(red, newpiv, rows[j])
                )
                if mem not in nxt:
                    nxt[mem] = (tuple(tuple(r) for r in red), newpiv)
        if not nxt:
            break
        level = []
        for mem in sorted(nxt):
            eqs, piv = nxt[mem]
            echelon[mem] = (eqs, piv)
            level.append(Flat(eqs, mem))
        levels.append(level)

    # Moebius recursion: mu(X) = -sum over flats Y strictly below X
    done: list[Flat] = [bottom]
    out_levels = [[bottom]]
    for level in levels[1:]:
        new_level = []
        for f in level:
            fs = set(f.members)
            mu = -sum(g.moebius for g in done if set(g.members) < fs)
            new_level.append(Flat(f.equations, f.members, mu))
        done.extend(new_level)
        out_levels.append(new_level)
    return Lattice(a, out_levels)


def moebius(lat: Lattice) -> dict[Flat, int]:
    return lat.moebius()


def codim2_flats(lat: Lattice) -> list[Flat]:
    return lat.codim2_flats()


def char_poly(a: Arrangement) -> IntPoly:
    if len(a) == 0:
        return [0] * a.ambient_dim + [1]
    return build_lattice(a).char_poly()


def poly_from_roots(roots: Sequence[int]) -> IntPoly:
    out = [1]
    for r in roots:
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] += c
            nxt[i] -= r * c
        out = nxt
    return out


def _eval(coeffs: IntPoly, t: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * t + c
    return v


def _divide_linear(coeffs: IntPoly, r: int) -> IntPoly:
    # synthetic division by (t - r), remainder assumed zero
    n = len(coeffs) - 1
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = acc * r + coeffs[i]
        q[i - 1] = acc
    return q


def integer_roots(coeffs: IntPoly) -> list[int] | None:
    """Roots of a monic integer polynomial if it splits into integer linear factors."""
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if coeffs[-1] != 1:
        return None
    roots: list[int] = []
    while len(coeffs) > 1:
        if coeffs[0] == 0:
            roots.append(0)
            coeffs = coeffs[1:]
            continue
        c0 = abs(coeffs[0])
        found = None
        for d in range(1, c0 + 1):
            if c0 % d:
                continue
            for cand in (d, -d):
                if _eval(coeffs, cand) == 0:
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            return None
        roots.append(found)
        coeffs = _divide_linear(coeffs, found)
    return sorted(roots)


def poly_str(coeffs: IntPoly, var: str = "t") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        sign = "-" if c < 0 else "+"
        parts.append(body if not parts and sign == "+" else (f"-{body}" if not parts else f" {sign} {body}"))
    return "".join(parts) or "0"


def rank2_flats(a: Arrangement) -> list[Flat]:
    """Codimension-2 flats straight from pairs of hyperplanes, without the full lattice."""
    rows = a.rows()
    ell = a.ambient_dim
    seen: dict[tuple[int, ...], Flat] = {}
    covered: set[tuple[int, int]] = set()
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if (i, j) in covered:
                continue
            red, piv = rref([rows[i], rows[j]], ell)
            mem = tuple(k for k in range(len(rows)) if _in_rowspace(red, piv, rows[k]))
            for x in mem:
                for y in mem:
                    if x < y:
                        covered.add((x, y))
            seen[mem] = Flat(tuple(tuple(r) for r in red), mem, len(mem) - 1)
    return [seen[m] for m in sorted(seen)]
