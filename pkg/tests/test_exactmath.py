import random
from fractions import Fraction

import pytest
import sympy

from arrlog.exactmath import (MultiPoly, as_fraction, invert, kernel_basis, linear_form_pivot, mat_vec,
                              monomials, poly_arith, poly_gcd, poly_matrix_det, rank, reduce_mod_form,
                              rref, solve_square)
from oracles import leibniz_det, naive_rank, naive_rref, to_sympy

X, Y, Z = (MultiPoly.var(3, i) for i in range(3))


def test_as_fraction_accepts_strings_and_ints():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(2) == 2


def test_poly_arith_basic():
    assert poly_arith(X + Y, X - Y, "mul") == X * X - Y * Y
    assert poly_arith(X, Y, "add") == X + Y
    assert poly_arith(X, X, "sub").is_zero()
    assert poly_arith(X, Fraction(1, 2), "scale") == X.scale(Fraction(1, 2))
    with pytest.raises(ValueError):
        poly_arith(X, Y, "pow")


def test_homogeneity_and_degree():
    p = X * Y - Z * Z
    assert p.is_homogeneous() and p.degree() == 2
    assert not (p + X).is_homogeneous()


def test_monomial_count():
    assert len(monomials(3, 4)) == 15
    assert len(monomials(4, 0)) == 1


def test_linear_form_pivot_is_largest_index():
    assert linear_form_pivot(X - Y) == 1
    assert linear_form_pivot(X + 2 * Z) == 2


def test_reduce_mod_form_pivot_rule():
    # pivot y: y -> x, so x(x - z) is already reduced
    alpha = X - Y
    r = reduce_mod_form(X * (X - Z), alpha)
    assert r == X * X - X * Z
    # the alternate normal form y^2 - yz is congruent to it
    assert (r - (Y * Y - Y * Z)).divmod(alpha)[1].is_zero()


def test_reduce_mod_form_kills_multiples():
    alpha = X + 2 * Y - Z
    assert reduce_mod_form(alpha * (X * Y + Z * Z), alpha).is_zero()


def test_divmod_exact():
    q, r = (X * X - Y * Y).divmod(X - Y)
    assert r.is_zero() and q == X + Y


def test_gcd_against_sympy():
    rng = random.Random(3)
    xs = sympy.symbols("x0:3")
    for _ in range(20):
        common, u, v = (MultiPoly.linear([rng.randint(-3, 3) for _ in range(3)]) for _ in range(3))
        p, q = common * u, common * v
        if p.is_zero() or q.is_zero():
            continue
        g = poly_gcd([p, q])
        ref = sympy.gcd(to_sympy(p, xs), to_sympy(q, xs))
        assert sympy.simplify(to_sympy(g, xs) / ref).is_number


def test_det_matches_leibniz():
    m = [[X, Y, Z], [Y * Y, X * Z, Y * Z], [X, X + Y, Z]]
    assert poly_matrix_det(m) == leibniz_det(m)
    assert poly_matrix_det([[X, 0 * X, 0 * X], [0 * X, Y, 0 * X], [0 * X, 0 * X, Z]]) == X * Y * Z


def test_kernel_example():
    k = kernel_basis([[1, 1, 0], [0, 1, 1]])
    assert len(k) == 1
    v = k[0]
    assert [v[0] / v[2], v[1] / v[2]] == [1, -1]


@pytest.mark.parametrize("seed", range(5))
def test_rref_and_rank_match_naive(seed):
    rng = random.Random(seed)
    m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)] for _ in range(4)]
    m[3] = [a + b for a, b in zip(m[0], m[1])]
    red, piv = rref(m)
    nred, npiv = naive_rref(m)
    assert piv == npiv and red == nred
    assert rank(m) == naive_rank(m) == 3


def test_invert_and_solve():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = invert(m)
    for i, row in enumerate(m):
        assert mat_vec(inv, [r[i] for r in m]) == [Fraction(int(j == i)) for j in range(3)]
    x = solve_square(m, [1, 2, 3])
    assert mat_vec(m, x) == [1, 2, 3]


def test_singular_invert_raises():
    with pytest.raises(Exception):
        invert([[1, 2], [2, 4]])
