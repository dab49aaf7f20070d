"""Exact scalars, multivariate polynomials and small dense linear algebra over Q.

Scalars are :class:`fractions.Fraction`.  Polynomials are stored as a map from
exponent tuples to nonzero coefficients; every arrangement handled here is
small (a dozen hyperplanes, at most a handful of variables) so a dense
exponent map is plenty.

Matrices are plain lists of rows.  Elimination is fraction-free (Bareiss) on
integer-scaled rows; the large sparse systems built by the graded derivation
engine go through :mod:`arrlog.sparse` instead.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import lcm
from typing import Iterable, Mapping, Sequence

import flint

Rational = Fraction
Exponent = tuple[int, ...]
RatMatrix = list[list[Fraction]]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def grlex_key(exp: Exponent):
    return (sum(exp), exp)


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Exponent, ...]:
    """All exponent vectors of total ``degree`` in ``nvars`` variables.

    Ordered descending in graded-lex, which fixes the column order of every
    graded linear system built on top of it.
    """
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grlex_key, reverse=True)
    return tuple(out)


def variable_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


class MultiPoly:
    """Polynomial in ``nvars`` variables with rational coefficients.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 0:
            raise ValueError("number of variables must be non-negative")
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.nvars = nvars
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> MultiPoly:
        # trusted constructor: terms already normalized
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> MultiPoly:
        c = as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> MultiPoly:
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence) -> MultiPoly:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = as_fraction(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(n, terms)

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> MultiPoly:
        return MultiPoly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def linear_coeffs(self) -> list[Fraction]:
        """Coefficient vector of a homogeneous linear form."""
        if any(sum(e) != 1 for e in self.terms):
            raise ValueError("not a homogeneous linear form")
        out = [Fraction(0)] * self.nvars
        for e, c in self.terms.items():
            out[e.index(1)] = c
        return out

    def leading_exponent(self) -> Exponent:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_exponent()]

    def monic(self) -> MultiPoly:
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: MultiPoly):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> MultiPoly | None:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> MultiPoly:
        c = as_fraction(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return MultiPoly._raw(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def shift(self, exp: Exponent) -> MultiPoly:
        """Multiply by the monomial ``x^exp``."""
        return MultiPoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}
        )

    def diff(self, i: int) -> MultiPoly:
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.nvars, terms)

    def evaluate(self, point: Sequence) -> Fraction:
        pt = [as_fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term *= v**k
            total += term
        return total

    def substitute(self, images: Sequence[MultiPoly]) -> MultiPoly:
        """Replace ``x_i`` by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return self
        target = images[0].nvars
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        out = MultiPoly.zero(target)
        for e, c in self.terms.items():
            term = MultiPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def divmod(self, divisor: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
        """Multivariate division by a single polynomial under graded-lex.

        A single polynomial is a Groebner basis of the ideal it generates, so
        the remainder vanishes exactly when ``divisor`` divides ``self``.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead = divisor.leading_exponent()
        lc = divisor.terms[lead]
        quot: dict[Exponent, Fraction] = {}
        rem: dict[Exponent, Fraction] = {}
        work = dict(self.terms)
        while work:
            e = max(work, key=grlex_key)
            c = work[e]
            if all(a >= b for a, b in zip(e, lead)):
                qe = tuple(a - b for a, b in zip(e, lead))
                qc = c / lc
                quot[qe] = quot.get(qe, 0) + qc
                for de, dc in divisor.terms.items():
                    te = tuple(a + b for a, b in zip(qe, de))
                    v = work.get(te, 0) - qc * dc
                    if v:
                        work[te] = v
                    else:
                        work.pop(te, None)
            else:
                rem[e] = c
                del work[e]
        return MultiPoly(self.nvars, quot), MultiPoly(self.nvars, rem)

    def exact_div(self, divisor: MultiPoly) -> MultiPoly:
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = list(names or variable_names(self.nvars))
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.to_str()!r}, nvars={self.nvars})"


def poly_arith(a: MultiPoly, b, op: str) -> MultiPoly:
    """Dispatch helper mirroring ``a op b`` for op in add/sub/mul/scale."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def linear_form_pivot(alpha: MultiPoly) -> int:
    """Largest variable index carrying a nonzero coefficient of ``alpha``."""
    if alpha.is_zero():
        raise ValueError("zero linear form")
    coeffs = alpha.linear_coeffs()
    return max(i for i, c in enumerate(coeffs) if c)


def reduce_mod_form(p: MultiPoly, alpha: MultiPoly) -> MultiPoly:
    """Canonical representative of ``p`` in ``S/(alpha)``.

    The pivot variable of ``alpha`` (largest index with nonzero coefficient)
    is eliminated by substitution, so the result is zero iff alpha divides p.
    """
    p._check(alpha)
    j = linear_form_pivot(alpha)
    coeffs = alpha.linear_coeffs()
    cj = coeffs[j]
    images = [MultiPoly.var(p.nvars, i) for i in range(p.nvars)]
    images[j] = MultiPoly.linear([-c / cj if i != j else 0 for i, c in enumerate(coeffs)])
    return p.substitute(images)


# ---------------------------------------------------------------------------
# dense linear algebra
# ---------------------------------------------------------------------------


def _integer_row(row: Iterable) -> list[int]:
    row = [as_fraction(v) for v in row]
    den = lcm(*(v.denominator for v in row)) if row else 1
    return [int(v * den) for v in row]


def _bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; entries stay integral minors."""
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        piv = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - f * pr[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form of the row space, with pivot columns."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    rows = [_integer_row(r) for r in m]
    ech, pivots = _bareiss_echelon(rows, ncols)
    out = [[Fraction(v) for v in r] for r in ech]
    for k in range(len(out) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / out[k][c]
        out[k] = [v * inv for v in out[k]]
        for i in range(k):
            f = out[i][c]
            if f:
                out[i] = [a - f * b for a, b in zip(out[i], out[k])]
    return out, pivots


def rank(m: Sequence[Sequence], ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    return len(_bareiss_echelon([_integer_row(r) for r in m], ncols)[1])


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column (ascending)."""
    if ncols is None:
        if not m:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(m[0])
    red, pivots = rref(m, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis


def subspace_dim(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise ValueError("vectors of unequal length")
    return rank(vectors, n)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((as_fraction(a) * as_fraction(b) for a, b in zip(row, v)), Fraction(0)) for row in m]


def solve_square(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``m x = b`` for an invertible square ``m``."""
    n = len(m)
    aug = [list(map(as_fraction, row)) + [as_fraction(bi)] for row, bi in zip(m, b)]
    red, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n] for row in red]


def invert(m: Sequence[Sequence]) -> RatMatrix:
    n = len(m)
    aug = [list(map(as_fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# polynomial matrices and gcd
# ---------------------------------------------------------------------------


def poly_matrix_det(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion with memoized minors (sizes up to ~6)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    if n == 0:
        raise ValueError("empty matrix")
    nv = m[0][0].nvars
    memo: dict[tuple[int, ...], MultiPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if row == n:
            return MultiPoly.one(nv)
        if cols in memo:
            return memo[cols]
        total = MultiPoly.zero(nv)
        for k, c in enumerate(cols):
            entry = m[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1 :])
            term = entry * sub
            total = total - term if k % 2 else total + term
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


@lru_cache(maxsize=None)
def _mpoly_ctx(nvars: int):
    return flint.fmpq_mpoly_ctx.get(("x", nvars), "deglex")


def _to_flint(p: MultiPoly):
    ctx = _mpoly_ctx(p.nvars)
    return ctx.from_dict({e: flint.fmpq(c.numerator, c.denominator) for e, c in p.terms.items()})


def _from_flint(f, nvars: int) -> MultiPoly:
    terms = {}
    for e, c in f.to_dict().items():
        c = flint.fmpq(c)
        terms[tuple(int(v) for v in e)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(nvars, terms)


def poly_gcd(ps: Sequence[MultiPoly]) -> MultiPoly:
    """Monic (graded-lex) gcd of a list of polynomials."""
    nonzero = [p for p in ps if not p.is_zero()]
    if not nonzero:
        raise ValueError("gcd of all-zero input")
    nv = nonzero[0].nvars
    if nv == 0:
        return MultiPoly.one(0)
    g = _to_flint(nonzero[0])
    for p in nonzero[1:]:
        if p.nvars != nv:
            raise ValueError("variable count mismatch")
        g = g.gcd(_to_flint(p))
    return _from_flint(g, nv).monic()
