"""Named arrangements used by the corpus, the tests and the CLI."""

from __future__ import annotations

from itertools import combinations

from .arrangement import Arrangement

X, Y, Z = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def star_plus() -> Arrangement:
    """yz(x-z)(x+z)(x-y)(x+y)."""
    return Arrangement.from_rows([Y, Z, (1, 0, -1), (1, 0, 1), (1, -1, 0), (1, 1, 0)])


def star7() -> Arrangement:
    """x, x+-y, x+-2y, y-z, z: seven lines with chi = (t-1)(t-3)^2."""
    return Arrangement.from_rows([X, (1, 1, 0), (1, -1, 0), (1, 2, 0), (1, -2, 0), (0, 1, -1), Z])


def square_prime() -> Arrangement:
    """x, y, x-z, y-z."""
    return Arrangement.from_rows([X, Y, (1, 0, -1), (0, 1, -1)])


def square_diag() -> Arrangement:
    return square_prime().add((1, -1, 0))


def b_n(n: int) -> Arrangement:
    """x z (y-z) prod_{k=1..n} (x + k y)."""
    if n < 1:
        raise ValueError("n must be positive")
    return Arrangement.from_rows([X, Z, (0, 1, -1)] + [(1, k, 0) for k in range(1, n + 1)])


def braid3() -> Arrangement:
    """x+-y, x+-z, y+-z."""
    rows = []
    for i, j in combinations(range(3), 2):
        for s in (1, -1):
            r = [0, 0, 0]
            r[i], r[j] = 1, s
            rows.append(r)
    return Arrangement.from_rows(rows)


def braid_a(n: int) -> Arrangement:
    """x_i - x_j in K^n (not essential)."""
    rows = []
    for i, j in combinations(range(n), 2):
        r = [0] * n
        r[i], r[j] = 1, -1
        rows.append(r)
    return Arrangement(n, rows)


# no three of these meet in a line and no unexpected collinear double points
# among the first four, five or six; checked by the test-suite
_GENERIC = [X, Y, Z, (1, 1, 1), (1, 2, 5), (1, -3, 4)]


def generic(n: int) -> Arrangement:
    if not 3 <= n <= len(_GENERIC):
        raise ValueError(f"generic(n) is available for 3 <= n <= {len(_GENERIC)}")
    return Arrangement.from_rows(_GENERIC[:n])


def boolean(ell: int) -> Arrangement:
    return Arrangement.from_rows([[int(i == j) for j in range(ell)] for i in range(ell)])


NAMED = {
    "starplus": star_plus,
    "star7": star7,
    "square": square_prime,
    "square_diag": square_diag,
    "braid3": braid3,
}
