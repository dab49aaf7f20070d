"""Minimal restriction number t_A and the related inequalities.

For H not in A, |(A u H)^H| = |A| - sum over codim-2 flats X inside H of
(|A_X| - 1), so the count depends only on which codim-2 flats H contains.
A hyperplane containing two or more flats is fixed by any two of them (the
pair-determined candidates).  A hyperplane containing exactly one flat X
scores |A| - (|A_X| - 1) or better, and a pencil member through X off A
realizes at most that.  A hyperplane containing none scores |A|, which the
generic candidate realizes.  Hence the minimum over the candidates is t_A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import Arrangement, Hyperplane
from .exactmath import kernel_basis, rank
from .lattice import Flat, rank2_flats
from .logder import DegreeSequence, InvariantError


@dataclass
class RestrictionReport:
    t_value: int
    witness: Hyperplane
    r_value: int
    contained_flats: int
    inequality_slack: int | None = None
    notes: list[str] = field(default_factory=list)


def _contains(h: Hyperplane, flat: Flat) -> bool:
    return rank(list(flat.equations) + [h.coeffs]) == flat.codim


def _pair_form(x: Flat, y: Flat) -> list[Fraction] | None:
    """Unique form vanishing on both flats, when the row spaces meet in a line."""
    rows = list(x.equations) + list(y.equations)
    if rank(rows) != 3:
        return None
    # combinations a*x1 + b*x2 + c*y1 + d*y2 = 0
    transpose = [list(col) for col in zip(*rows)]
    (coef,) = kernel_basis(transpose, 4)
    form = [coef[0] * u + coef[1] * v for u, v in zip(*x.equations)]
    return form if any(form) else None


def candidate_hyperplanes(a: Arrangement, flats: list[Flat] | None = None) -> list[Hyperplane]:
    if a.ambient_dim < 3:
        raise ValueError("candidate search needs ambient dimension at least 3")
    flats = rank2_flats(a) if flats is None else flats
    out: list[Hyperplane] = []
    seen = set()

    def push(form):
        h = Hyperplane(form)
        if h not in a and h not in seen:
            seen.add(h)
            out.append(h)

    for i, x in enumerate(flats):
        for y in flats[i + 1:]:
            if set(x.members) & set(y.members):
                continue
            form = _pair_form(x, y)
            if form is not None:
                push(form)
    for x in flats:
        u, v = x.equations
        s = 1
        while True:
            form = [p + s * q for p, q in zip(u, v)]
            if any(form) and Hyperplane(form) not in a:
                push(form)
                break
            s = -s if s > 0 else -s + 1
    k = 2
    while True:
        h = Hyperplane([Fraction(k) ** i for i in range(a.ambient_dim)])
        if h not in a and not any(_contains(h, x) for x in flats):
            push(h.coeffs)
            break
        k += 1
    return out


def minimal_restriction(a: Arrangement, seq: DegreeSequence | None = None) -> RestrictionReport:
    flats = rank2_flats(a)
    best = None
    r_value = 0
    for h in candidate_hyperplanes(a, flats):
        size = a.restriction_size(h)
        contained = sum(1 for x in flats if _contains(h, x))
        r_value = max(r_value, contained)
        if best is None or size < best[0]:
            best = (size, h, contained)
    t, witness, contained = best
    report = RestrictionReport(t, witness, r_value, contained)
    if t != len(a) - r_value:
        report.notes.append(
            f"t = {t} differs from |A| - r = {len(a) - r_value}: flats are weighted by |A_X| - 1"
        )
    if seq is not None and not seq.truncated:
        report.inequality_slack = t - (len(a) - seq.d_max)
    return report


@dataclass
class InequalityReport:
    t_value: int
    size: int
    d_max: int
    slack: int

    @property
    def equality(self) -> bool:
        return self.slack == 0


def check_unequal(a: Arrangement, seq: DegreeSequence, report: RestrictionReport | None = None) -> InequalityReport:
    """t_A >= |A| - d_A."""
    if seq.truncated:
        raise ValueError("degree sequence is truncated")
    report = report or minimal_restriction(a)
    out = InequalityReport(report.t_value, len(a), seq.d_max, report.t_value - (len(a) - seq.d_max))
    if out.slack < 0:
        raise InvariantError(f"t_A = {out.t_value} < |A| - d_A = {len(a) - seq.d_max}")
    return out


@dataclass
class TwoPointReport:
    hypothesis: bool
    points: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    t_value: int | None = None
    d_max: int | None = None
    consistent: bool = True
    notes: list[str] = field(default_factory=list)


def check_two_points(a: Arrangement, seq: DegreeSequence | None = None) -> TwoPointReport:
    """Two codim-2 points with mu(p1) + mu(p2) = |A| - 2 and no common line."""
    if a.ambient_dim != 3:
        raise ValueError("two-point criterion is stated for l = 3")
    flats = rank2_flats(a)
    pair = None
    for i, p in enumerate(flats):
        for q in flats[i + 1:]:
            if p.moebius + q.moebius == len(a) - 2 and not set(p.members) & set(q.members):
                pair = (p.members, q.members)
                break
        if pair:
            break
    if pair is None:
        return TwoPointReport(False)
    t = minimal_restriction(a).t_value
    rep = TwoPointReport(True, pair, t)
    if t != 2:
        rep.consistent = False
        rep.notes.append(f"hypothesis holds but t_A = {t}")
    if seq is not None and not seq.truncated:
        rep.d_max = seq.d_max
        if seq.d_max < len(a) - 2:
            rep.consistent = False
            rep.notes.append(f"d_A = {seq.d_max} < |A| - 2")
    return rep
