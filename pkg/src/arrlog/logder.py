"""Logarithmic derivation modules: graded pieces, minimal generators, freeness,
the b-polynomial, addition of hyperplanes and degree-based criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arrangement import Arrangement, Hyperplane, hyperplane, hyperplane_rank
from .exactmath import MultiPoly, kernel_basis, monomials, poly_gcd, poly_matrix_det, reduce_mod_form
from .graded import (
    EssentialEngine,
    ambient_system,
    ambient_vector_to_coeffs,
    coeffs_to_ambient_vector,
    normalize_coeffs,
    select_new,
)
from .lattice import char_poly, integer_roots
from .sparse import Echelon, int_rank


class InvariantError(AssertionError):
    """A proven identity failed on concrete data."""


class ConditionError(ValueError):
    def __init__(self, condition: str, message: str):
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition


class Derivation:
    """theta = sum p_i d/dx_i with homogeneous coefficients of one degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[MultiPoly]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("derivation needs at least one coordinate")
        n = coeffs[0].nvars
        degs = set()
        for p in coeffs:
            if p.nvars != n:
                raise ValueError("coefficient variable counts differ")
            if p:
                if not p.is_homogeneous():
                    raise ValueError("derivation coefficients must be homogeneous")
                degs.add(p.degree())
        if len(degs) > 1:
            raise ValueError(f"mixed coefficient degrees {sorted(degs)}")
        self.coeffs = coeffs

    @classmethod
    def euler(cls, ell: int) -> Derivation:
        return cls([MultiPoly.var(ell, i) for i in range(ell)])

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        degs = [p.degree() for p in self.coeffs if p]
        return degs[0] if degs else -1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, f: MultiPoly) -> MultiPoly:
        out = MultiPoly.zero(self.nvars)
        for i, p in enumerate(self.coeffs):
            if p:
                out = out + p * f.diff(i)
        return out

    def __add__(self, other: Derivation) -> Derivation:
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: Derivation) -> Derivation:
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c) -> Derivation:
        return Derivation([p.scale(c) for p in self.coeffs])

    def times(self, f: MultiPoly) -> Derivation:
        return Derivation([p * f for p in self.coeffs])

    def normalized(self) -> Derivation:
        return Derivation(normalize_coeffs(self.coeffs))

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def proportional_to(self, other: Derivation) -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized() == other.normalized() or self.normalized() == other.normalized().scale(-1)

    def is_logarithmic(self, a: Arrangement) -> bool:
        """theta(alpha_H) in (alpha_H) for every H."""
        return all(not reduce_mod_form(self(h.form), h.form) for h in a)

    def preserves(self, q: MultiPoly) -> bool:
        """theta(Q) in Q*S, by exact division."""
        _, rem = self(q).divmod(q)
        return not rem

    def vector(self, d: int | None = None) -> dict[int, Fraction]:
        return coeffs_to_ambient_vector(self.coeffs, self.degree if d is None else d)

    def to_str(self) -> str:
        names = [f"x{i + 1}" for i in range(self.nvars)] if self.nvars > 3 else ["x", "y", "z"][: self.nvars]
        parts = []
        for name, p in zip(names, self.coeffs):
            if p:
                parts.append(f"({p.to_str(names)})*d{name}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"Derivation({self.to_str()})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [
                [[list(e), _ratstr(c)] for e, c in sorted(p.terms.items(), reverse=True)]
                for p in self.coeffs
            ],
        }


def _ratstr(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class GradedPiece:
    degree: int
    basis: tuple[Derivation, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class DegreeSequence:
    """Minimal homogeneous generators of D(A).

    ``degrees``/``generators`` describe the essential part.  When the
    hyperplanes have a common nonzero intersection, D(A) additionally has
    ``len(center)`` generators of degree 0 (constant fields along it).
    """

    ambient_dim: int
    degrees: tuple[int, ...]
    generators: tuple[Derivation, ...]
    center: tuple[Derivation, ...] = ()
    truncated: bool = False
    cap: int = 0
    bound: int = 0
    graded_dims: dict[int, int] = field(default_factory=dict)
    # g-coordinates from the essential engine, used for graded checks
    coords: tuple = field(default=(), repr=False, compare=False)

    @property
    def d_max(self) -> int:
        full = self.full_degrees()
        return max(full) if full else 0

    def full_degrees(self) -> tuple[int, ...]:
        return (0,) * len(self.center) + self.degrees

    def n(self, i: int) -> int:
        """Number of generators of degree at most i."""
        return sum(1 for d in self.full_degrees() if d <= i)

    def __len__(self):
        return len(self.degrees) + len(self.center)


def default_cap(a: Arrangement) -> int:
    return max(len(a), 2 * a.ambient_dim)


def generation_bound(a: Arrangement) -> int:
    """Degree beyond which D(A) has no new minimal generators: |A| - rank + 1."""
    return len(a) - a.rank() + 1 if len(a) else 0


def graded_dim(a: Arrangement, d: int) -> GradedPiece:
    """Basis of D(A)_d from the full coefficient system."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    ell = a.ambient_dim
    rows, ncols = ambient_system(a, d)
    ech = Echelon(rows, ncols)
    basis = []
    for vec in ech.kernel():
        basis.append(Derivation(ambient_vector_to_coeffs(vec, ell, d)))
    return GradedPiece(d, tuple(basis))


def span_dim(gens: Iterable[Derivation], d: int) -> int:
    """Dimension of the degree-d part of the module generated by ``gens``."""
    gens = list(gens)
    if not gens:
        return 0
    ncols = gens[0].nvars * len(monomials(gens[0].nvars, d))
    vecs = []
    for g in gens:
        e = g.degree
        if e < 0 or e > d:
            continue
        for u in monomials(g.nvars, d - e):
            mono = MultiPoly(g.nvars, {u: 1})
            vecs.append(Derivation([p * mono for p in g.coeffs]).vector(d))
    return int_rank(_integerize(vecs), ncols)


def _integerize(vecs: list[dict]) -> list[dict[int, int]]:
    from math import lcm

    out = []
    for v in vecs:
        den = lcm(*(Fraction(x).denominator for x in v.values())) if v else 1
        out.append({k: int(Fraction(x) * den) for k, x in v.items()})
    return out


def degree_sequence(a: Arrangement, max_degree: int | None = None, *, stop_at_bound: bool = True) -> DegreeSequence:
    """Minimal generator degrees via degreewise linear algebra.

    ``stop_at_bound`` skips degrees above |A| - rank + 1, where no new minimal
    generators can occur; ``truncated`` is set exactly when the cap is below
    that bound.
    """
    cap = default_cap(a) if max_degree is None else max_degree
    if cap < 0:
        raise ValueError("max_degree must be non-negative")
    ell = a.ambient_dim
    engine = EssentialEngine(a)
    center = tuple(Derivation(c) for c in engine.center_coeffs())
    bound = generation_bound(a)
    top = min(cap, bound) if stop_at_bound else cap
    gens: list[tuple[int, list[dict]]] = []
    dims: dict[int, int] = {}
    for d in range(1, top + 1):
        if engine.rank == 0:
            break
        rows = engine.system(d)
        ncols = engine.ncols(d)
        dim = ncols - int_rank(rows, ncols)
        dims[d] = dim
        old = engine.image(gens, d)
        old_rank = int_rank(old, ncols)
        new = dim - old_rank
        if new < 0:
            raise InvariantError(f"degree {d}: image exceeds kernel")
        if new:
            for vec in select_new(engine, d, old, new, rows):
                gens.append((d, engine.column_to_g(vec, d)))
    degrees = tuple(d for d, _ in gens)
    derivs = tuple(Derivation(engine.lift(g)) for _, g in gens)
    return DegreeSequence(
        ambient_dim=ell,
        degrees=degrees,
        generators=derivs,
        center=center,
        truncated=cap < bound,
        cap=cap,
        bound=bound,
        graded_dims=dims,
        coords=tuple(gens),
    )


def minimality_drops(a: Arrangement, seq: DegreeSequence) -> list[tuple[int, int, int]]:
    """For each generator: (degree, dim D(A)_d, dim of what the others generate)."""
    engine = EssentialEngine(a)
    gens = list(seq.coords)
    out = []
    for i, (d, _) in enumerate(gens):
        ncols = engine.ncols(d)
        full = ncols - int_rank(engine.system(d), ncols)
        rest = int_rank(engine.image(gens, d, skip=i), ncols)
        out.append((d, full, rest))
    return out


@dataclass(frozen=True)
class FreenessResult:
    free: bool
    exponents: tuple[int, ...] | None
    determinant: MultiPoly | None
    scalar: Fraction | None
    reason: str


def is_free(a: Arrangement, seq: DegreeSequence | None = None) -> FreenessResult:
    """Saito's criterion on the minimal generators."""
    if not a.is_essential():
        raise ValueError("is_free expects an essential arrangement")
    if seq is None:
        seq = degree_sequence(a)
    ell = a.ambient_dim
    if seq.truncated:
        return FreenessResult(False, None, None, None, "degree sequence truncated")
    if len(seq.generators) != ell:
        return FreenessResult(False, None, None, None, f"{len(seq.generators)} generators for rank {ell}")
    det = poly_matrix_det([list(g.coeffs) for g in seq.generators])
    q = a.defining_poly()
    if not det:
        return FreenessResult(False, None, det, None, "generators are dependent")
    c = det.leading_coefficient() / q.leading_coefficient()
    if det != q.scale(c):
        raise InvariantError("minimal generators of the right count but determinant is not Q(A)")
    return FreenessResult(True, seq.degrees, det, c, "Saito determinant equals Q(A) up to a scalar")


def saito_certifies(gens: Sequence[Derivation], a: Arrangement) -> bool:
    if len(gens) != a.ambient_dim:
        return False
    det = poly_matrix_det([list(g.coeffs) for g in gens])
    q = a.defining_poly()
    if not det:
        return False
    return det == q.scale(det.leading_coefficient() / q.leading_coefficient())


def all_generators(seq: DegreeSequence) -> list[Derivation]:
    return list(seq.center) + list(seq.generators)


def terao_b_poly(a_prime: Arrangement, h, seq: DegreeSequence | None = None) -> MultiPoly:
    """Principal generator b of the images theta(alpha_H) mod alpha_H over D(A')."""
    h = hyperplane(h)
    if h in a_prime:
        raise ValueError(f"{h} already belongs to the arrangement")
    if seq is None:
        seq = degree_sequence(a_prime)
    if seq.truncated:
        raise ValueError("degree sequence is truncated")
    alpha = h.form
    images = []
    for g in all_generators(seq):
        r = reduce_mod_form(g(alpha), alpha)
        if r:
            images.append(r)
    if not images:
        raise ArithmeticError("all images vanish modulo the new form")
    b = poly_gcd(images)
    expected = len(a_prime) - a_prime.restriction_size(h)
    if b.degree() != expected:
        raise InvariantError(f"deg b = {b.degree()} but |A'| - |A^H| = {expected}")
    return b


@dataclass
class AdditionResult:
    generators: list[Derivation]
    d: int
    b_polys: list[MultiPoly]
    c_matrix: list[list[Fraction]]
    pivot_rows: list[int]
    verified_up_to: int

    @property
    def degrees(self) -> list[int]:
        return sorted(g.degree for g in self.generators)


def _point_off(x_basis: list[list[Fraction]], a_prime: Arrangement) -> list[Fraction] | None:
    """Deterministic rational point of span(x_basis) missing every hyperplane."""
    ell = a_prime.ambient_dim
    for m in range(1, 10 * max(len(a_prime), 1) + 1):
        pt = [Fraction(0)] * ell
        for k, v in enumerate(x_basis):
            w = Fraction(m) ** k
            pt = [p + w * c for p, c in zip(pt, v)]
        if all(not h.contains_point(pt) for h in a_prime):
            return pt
    return None


def check_addition_conditions(a_prime: Arrangement, hs: Sequence[Hyperplane]) -> int:
    """Verify conditions (1)-(3) for adding hs to A' and return the common d."""
    hs = [hyperplane(h) for h in hs]
    for h in hs:
        if h in a_prime:
            raise ConditionError("(1)", f"{h} already belongs to A'")
    if hyperplane_rank(hs) != len(hs):
        raise ConditionError("(1)", "added hyperplanes are linearly dependent")
    basis = kernel_basis([h.coeffs for h in hs], a_prime.ambient_dim)
    if _point_off(basis, a_prime) is None:
        if not basis or any(all(g.contains_point(v) for v in basis) for g in a_prime):
            raise ConditionError("(2)", "the intersection of the added hyperplanes lies in a hyperplane of A'")
        raise RuntimeError("no rational point found off A' within the attempt bound")
    ds = {len(a_prime) - a_prime.restriction_size(h) for h in hs}
    if len(ds) != 1:
        raise ConditionError("(3)", f"|A'| - |A^H_i| takes several values {sorted(ds)}")
    return ds.pop()


def addition_generators(a_prime: Arrangement, hs: Sequence, seq: DegreeSequence | None = None,
                        verify_up_to: int | None = None) -> AdditionResult:
    """Generators of D(A' + {H_1..H_q}) built from generators of D(A')."""
    hs = [hyperplane(h) for h in hs]
    if seq is None:
        seq = degree_sequence(a_prime)
    if seq.truncated:
        raise ValueError("degree sequence is truncated")
    base = all_generators(seq)
    if not hs:
        return AdditionResult(base, seq.d_max, [], [], [], 0)
    d = check_addition_conditions(a_prime, hs)
    if any(g.degree > d for g in base):
        raise ConditionError("(3)", f"D(A') has generators above degree d = {d}")
    thetas = [g for g in base if g.degree < d]
    phis = [g for g in base if g.degree == d]
    bs = [terao_b_poly(a_prime, h, seq) for h in hs]
    q = len(hs)
    c = []
    for phi in phis:
        row = []
        for h, b in zip(hs, bs):
            r = reduce_mod_form(phi(h.form), h.form)
            if not r:
                row.append(Fraction(0))
                continue
            coef = r.leading_coefficient() / b.leading_coefficient()
            if r != b.scale(coef):
                raise InvariantError("phi(alpha_H) is not a constant multiple of b modulo alpha_H")
            row.append(coef)
        c.append(row)
    # pivot rows scanned from the end, so that late generators absorb the new form
    pivots: list[int] = []
    for i in range(len(phis) - 1, -1, -1):
        trial = [c[j] for j in pivots + [i]]
        if hyperplane_rank_rows(trial) == len(trial):
            pivots.append(i)
        if len(pivots) == q:
            break
    if len(pivots) < q:
        raise InvariantError("coefficient matrix has rank below q")
    from .exactmath import invert

    cp_inv = invert([c[i] for i in pivots])
    # new_j = sum_k cp_inv[j][k] phi_{pivot_k} maps alpha_{H_m} to delta_{jm} b_m
    new_phis = []
    for j in range(q):
        acc = None
        for k in range(q):
            coef = cp_inv[j][k]
            if coef:
                term = phis[pivots[k]].scale(coef)
                acc = term if acc is None else acc + term
        new_phis.append(acc)
    rest = []
    for i, phi in enumerate(phis):
        if i in pivots:
            continue
        out = phi
        for j in range(q):
            if c[i][j]:
                out = out - new_phis[j].scale(c[i][j])
        rest.append(out)
    gens = list(thetas)
    gens += [phi.times(h.form).normalized() for phi, h in zip(new_phis, hs)]
    gens += [phi.normalized() for phi in rest if not phi.is_zero()]
    a = a_prime.add(*hs)
    for g in gens:
        if not g.is_logarithmic(a):
            raise InvariantError(f"constructed {g} is not in D(A)")
    top = verify_up_to if verify_up_to is not None else max(g.degree for g in gens)
    for e in range(0, top + 1):
        want = graded_dim(a, e).dim
        got = span_dim(gens, e)
        if want != got:
            raise InvariantError(f"degree {e}: constructed set spans {got} of {want}")
    return AdditionResult(gens, d, bs, c, pivots, top)


def hyperplane_rank_rows(rows: Sequence[Sequence]) -> int:
    from .exactmath import rank

    return rank(rows) if rows else 0


@dataclass
class Verdict:
    verdict: str
    details: dict


def check_nonfree_criterion(a: Arrangement, h) -> Verdict:
    """If chi(A \\ H) = prod (t - d_i) and |A^H| <= d_1 + ... + d_{l-1} - 1 then A \\ H is not free."""
    h = hyperplane(h)
    a_prime = a.delete(h)
    chi = char_poly(a_prime)
    roots = integer_roots(chi)
    ell = a.ambient_dim
    if roots is None or len(roots) != ell:
        return Verdict("inapplicable", {
            "char_poly": chi,
            "note": "chi does not split over Z, so A' cannot be free",
        })
    roots = sorted(roots)
    restr = a.restriction_size(h)
    bound = sum(roots[: ell - 1]) - 1
    details = {"roots": roots, "restriction": restr, "bound": bound}
    return Verdict("not_free" if restr <= bound else "inapplicable", details)


def generator_degree_lower_bound(a_prime: Arrangement, h, d: int) -> bool:
    """Whether |A^H| <= |A'| - d, which forces a generator of degree >= d."""
    h = hyperplane(h)
    if h in a_prime:
        raise ValueError(f"{h} already belongs to the arrangement")
    return a_prime.restriction_size(h) <= len(a_prime) - d


def check_numgen_bounds(a_prime: Arrangement, h, seq_prime: DegreeSequence | None = None,
                        seq: DegreeSequence | None = None) -> dict:
    h = hyperplane(h)
    if h in a_prime:
        raise ValueError(f"{h} already belongs to the arrangement")
    a = a_prime.add(h)
    seq_prime = seq_prime or degree_sequence(a_prime)
    seq = seq or degree_sequence(a)
    if seq_prime.truncated or seq.truncated:
        raise ValueError("degree sequence is truncated")
    d = seq_prime.d_max
    m = len(a_prime) - a_prime.restriction_size(h)
    report = {"d": d, "gap": m, "cases": []}
    if m == d:
        lhs, rhs = seq_prime.n(d) - 1, seq.n(d)
        report["cases"].append({"case": 1, "n_prime": seq_prime.n(d), "n": rhs, "holds": lhs <= rhs})
    if 1 <= m <= d:
        e = m - 1
        lhs, rhs = seq_prime.n(e), seq.n(e)
        report["cases"].append({"case": 2, "e": e, "n_prime": lhs, "n": rhs, "holds": lhs <= rhs})
    for case in report["cases"]:
        if not case["holds"]:
            raise InvariantError(f"generator count bound fails: {case}")
    return report


def check_4gens_freeness(a_prime: Arrangement, h, seq_prime: DegreeSequence | None = None) -> Verdict:
    h = hyperplane(h)
    if a_prime.ambient_dim != 3 or h in a_prime:
        return Verdict("hypotheses_unmet", {"reason": "needs l = 3 and a new plane"})
    seq_prime = seq_prime or degree_sequence(a_prime)
    degs = seq_prime.full_degrees()
    if seq_prime.truncated or len(degs) != 4 or degs[0] != 1:
        return Verdict("hypotheses_unmet", {"reason": f"degree sequence {list(degs)}"})
    _, d1, d2, d3 = degs
    a = a_prime.add(h)
    gap = len(a_prime) - a_prime.restriction_size(h)
    if gap != d3 or 1 + d1 + d2 != len(a):
        return Verdict("hypotheses_unmet", {"gap": gap, "degrees": list(degs)})
    res = is_free(a)
    if not res.free or tuple(res.exponents) != (1, d1, d2):
        raise InvariantError(f"expected free with exponents (1, {d1}, {d2}), got {res}")
    return Verdict("free_confirmed", {"exponents": [1, d1, d2]})


def check_3nonfree(a_prime: Arrangement, h, seq_prime: DegreeSequence | None = None,
                   crosscheck: bool = True) -> Verdict:
    """Non-freeness from the top degree of D(A') when k >= 5.

    The sequence used is that of A' (as the argument requires); the report
    records this choice.
    """
    h = hyperplane(h)
    if a_prime.ambient_dim != 3 or h in a_prime:
        return Verdict("inapplicable", {"reason": "needs l = 3 and a new plane"})
    a = a_prime.add(h)
    roots = integer_roots(char_poly(a))
    if roots is None or len(roots) != 3 or 1 not in roots:
        return Verdict("inapplicable", {"reason": "chi(A) does not split as (t-1)(t-a)(t-b)"})
    rest = sorted(roots)
    rest.remove(1)
    lo, hi = rest
    seq_prime = seq_prime or degree_sequence(a_prime)
    degs = seq_prime.full_degrees()
    details = {"a": lo, "b": hi, "degrees_prime": list(degs), "sequence_of": "A'"}
    if seq_prime.truncated or len(degs) < 5:
        details["reason"] = f"k = {len(degs)} < 5"
        return Verdict("inapplicable", details)
    dk = degs[-1]
    gap = len(a_prime) - a_prime.restriction_size(h)
    details.update(gap=gap, d_k=dk)
    if gap != dk or hi > dk:
        return Verdict("inapplicable", details)
    if crosscheck:
        count = len(degree_sequence(a))
        details["generators_of_A"] = count
        if count == 3:
            raise InvariantError("criterion says not free but D(A) has 3 generators")
    return Verdict("not_free", details)
