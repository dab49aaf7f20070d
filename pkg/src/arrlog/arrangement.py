"""Central hyperplane arrangements over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exactmath import MultiPoly, as_fraction, rank, rref


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _canonical(coeffs: Sequence) -> tuple[Fraction, ...]:
    coeffs = [as_fraction(c) for c in coeffs]
    lead = next((c for c in coeffs if c), None)
    if lead is None:
        raise ValueError("hyperplane form must be nonzero")
    return tuple(c / lead for c in coeffs)


@dataclass(frozen=True)
class Hyperplane:
    """Kernel of a linear form, scaled so its first nonzero coefficient is 1."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence):
        object.__setattr__(self, "coeffs", _canonical(coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def form(self) -> MultiPoly:
        return MultiPoly.linear(self.coeffs)

    def integer_coeffs(self) -> list[int]:
        """Primitive integer multiple of the form."""
        from math import gcd, lcm

        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return [v // g for v in ints]

    def contains_point(self, point: Sequence) -> bool:
        return sum(c * as_fraction(p) for c, p in zip(self.coeffs, point)) == 0

    def __str__(self):
        return self.form.to_str()

    def __repr__(self):
        return f"Hyperplane({self.form.to_str()})"


def hyperplane(obj) -> Hyperplane:
    if isinstance(obj, Hyperplane):
        return obj
    if isinstance(obj, MultiPoly):
        return Hyperplane(obj.linear_coeffs())
    return Hyperplane(obj)


def hyperplane_rank(hs: Iterable[Hyperplane]) -> int:
    """Codimension of the intersection of the given hyperplanes."""
    rows = [h.coeffs for h in hs]
    return rank(rows) if rows else 0


class Arrangement:
    """Ordered list of distinct hyperplanes in K^ell.

    Order is kept for reproducible output; equality ignores it.
    """

    __slots__ = ("ambient_dim", "hyperplanes", "_index")

    def __init__(self, ambient_dim: int, hyperplanes: Iterable = ()):
        self.ambient_dim = ambient_dim
        hs = []
        seen = {}
        for obj in hyperplanes:
            h = hyperplane(obj)
            if h.dim != ambient_dim:
                raise ValueError(f"{h} is not a form in {ambient_dim} variables")
            if h in seen:
                raise ValueError(f"duplicate hyperplane {h}")
            seen[h] = len(hs)
            hs.append(h)
        self.hyperplanes = tuple(hs)
        self._index = seen

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> Arrangement:
        if not rows:
            raise ValueError("cannot infer the dimension of an empty row list")
        return cls(len(rows[0]), rows)

    def __len__(self):
        return len(self.hyperplanes)

    def __iter__(self) -> Iterator[Hyperplane]:
        return iter(self.hyperplanes)

    def __getitem__(self, i) -> Hyperplane:
        return self.hyperplanes[i]

    def __contains__(self, h) -> bool:
        try:
            return hyperplane(h) in self._index
        except ValueError:
            return False

    def index(self, h) -> int:
        return self._index[hyperplane(h)]

    def __eq__(self, other):
        if not isinstance(other, Arrangement):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and set(self._index) == set(other._index)

    def __hash__(self):
        return hash((self.ambient_dim, frozenset(self._index)))

    def __repr__(self):
        return f"Arrangement({self.ambient_dim}, [{', '.join(str(h) for h in self)}])"

    def rows(self) -> list[tuple[Fraction, ...]]:
        return [h.coeffs for h in self.hyperplanes]

    def rank(self) -> int:
        return hyperplane_rank(self.hyperplanes)

    def is_essential(self) -> bool:
        return self.rank() == self.ambient_dim

    def defining_poly(self) -> MultiPoly:
        q = MultiPoly.one(self.ambient_dim)
        for h in self.hyperplanes:
            q = q * h.form
        return q

    def delete(self, h) -> Arrangement:
        h = hyperplane(h)
        if h not in self._index:
            raise ValueError(f"{h} is not in the arrangement")
        return Arrangement(self.ambient_dim, [g for g in self.hyperplanes if g != h])

    def add(self, *hs) -> Arrangement:
        return Arrangement(self.ambient_dim, list(self.hyperplanes) + [hyperplane(h) for h in hs])

    def subarrangement(self, indices: Iterable[int]) -> Arrangement:
        return Arrangement(self.ambient_dim, [self.hyperplanes[i] for i in sorted(indices)])

    def restriction_size(self, h) -> int:
        """|(A u {h})^h|: number of distinct subspaces H' n h for H' != h."""
        h = hyperplane(h)
        keys = set()
        for g in self.hyperplanes:
            if g == h:
                continue
            red, _ = rref([h.coeffs, g.coeffs])
            keys.add(tuple(map(tuple, red)))
        return len(keys)

    def to_text(self) -> str:
        lines = [f"dim {self.ambient_dim}"]
        for h in self.hyperplanes:
            lines.append(" ".join(str(c) for c in h.integer_coeffs()))
        return "\n".join(lines) + "\n"


def defining_poly(a: Arrangement) -> MultiPoly:
    return a.defining_poly()


def is_essential(a: Arrangement) -> bool:
    return a.is_essential()


def delete(a: Arrangement, h) -> Arrangement:
    return a.delete(h)


def restriction_size(a: Arrangement, h) -> int:
    return a.restriction_size(h)


@dataclass(frozen=True)
class Essentialization:
    """Coordinates ``y = R x`` on V / (center); ``reduced`` lives in K^rank."""

    original: Arrangement
    reduced: Arrangement
    rows: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @property
    def center_dim(self) -> int:
        return self.original.ambient_dim - len(self.rows)

    def center_basis(self) -> list[list[Fraction]]:
        """Basis of the common intersection of all hyperplanes."""
        ell = self.original.ambient_dim
        out = []
        for j in range(ell):
            if j in self.pivots:
                continue
            v = [Fraction(0)] * ell
            v[j] = Fraction(1)
            for row, p in zip(self.rows, self.pivots):
                v[p] = -row[j]
            out.append(v)
        return out


def essentialize(a: Arrangement) -> Essentialization:
    ell = a.ambient_dim
    if len(a) == 0:
        return Essentialization(a, Arrangement(0, []), (), ())
    red, pivots = rref(a.rows(), ell)
    forms = [[h.coeffs[p] for p in pivots] for h in a]
    reduced = Arrangement(len(pivots), forms)
    return Essentialization(a, reduced, tuple(tuple(r) for r in red), tuple(pivots))


def parse_arrangement(text: str) -> Arrangement:
    """Parse the ``dim l`` / one-row-per-hyperplane text format."""
    dim = None
    rows: list[tuple[int, list[Fraction]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim":
                raise ParseError("expected 'dim <n>'", lineno, 1)
            try:
                dim = int(parts[1])
            except ValueError:
                raise ParseError(f"bad dimension {parts[1]!r}", lineno, line.index(parts[1]) + 1) from None
            if dim < 1:
                raise ParseError("dimension must be positive", lineno, line.index(parts[1]) + 1)
            continue
        vals = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            try:
                vals.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational {tok!r}", lineno, col + 1) from None
            col += len(tok)
        if len(vals) != dim:
            raise ParseError(f"expected {dim} coefficients, got {len(vals)}", lineno, 1)
        if not any(vals):
            raise ParseError("zero linear form", lineno, 1)
        rows.append((lineno, vals))
    if dim is None:
        raise ParseError("missing 'dim' header", 1, 1)
    hs = []
    seen = set()
    for lineno, vals in rows:
        h = Hyperplane(vals)
        if h in seen:
            raise ParseError(f"duplicate hyperplane {h}", lineno, 1)
        seen.add(h)
        hs.append(h)
    return Arrangement(dim, hs)
