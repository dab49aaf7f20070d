
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from arrlog.arrangement import Arrangement, Hyperplane
from arrlog.exactmath import MultiPoly, kernel_basis, mat_vec, rank, reduce_mod_form, linear_form_pivot
from arrlog.lattice import char_poly
from arrlog.logder import Derivation, degree_sequence
from arrlog.restriction import minimal_restriction
from oracles import brute_restriction, naive_rank, whitney_charpoly

small = st.integers(-3, 3)
SET = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=c, max_size=c),
                           min_size=1, max_size=max_rows))


@SET
@given(matrices())
def test_rank_and_kernel(m):
    ncols = len(m[0])
    assert rank(m) == naive_rank(m)
    ker = kernel_basis(m, ncols)
    assert len(ker) == ncols - naive_rank(m)
    for v in ker:
        assert all(x == 0 for x in mat_vec(m, v))


forms = st.lists(small, min_size=3, max_size=3).filter(any)


def polys(nvars=3, degree=3):
    mono = st.tuples(*[st.integers(0, degree)] * nvars).filter(lambda e: sum(e) == degree)
    return st.dictionaries(mono, st.integers(-4, 4), max_size=5).map(lambda t: MultiPoly(nvars, t))


@SET
@given(polys(), forms)
def test_reduce_mod_form_is_a_normal_form(p, alpha):
    a = MultiPoly.linear(alpha)
    r = reduce_mod_form(p, a)
    assert (p - r).divmod(a)[1].is_zero()
    piv = linear_form_pivot(a)
    assert all(e[piv] == 0 for e in r.terms)


arrangements = st.sets(st.tuples(small, small, small).filter(any).map(Hyperplane), min_size=3, max_size=6).map(
    lambda hs: Arrangement(3, sorted(hs, key=lambda h: h.coeffs)))


@SET
@given(arrangements)
def test_char_poly_whitney(a):
    assert char_poly(a) == whitney_charpoly(a.rows(), 3)


@SET
@given(arrangements, forms)
def test_restriction_size(a, h):
    assume(Hyperplane(h) not in a)
    assert a.restriction_size(h) == brute_restriction(a.rows(), h)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(arrangements)
def test_sequence_and_inequality(a):
    assume(a.is_essential())
    seq = degree_sequence(a)
    assert not seq.truncated
    assert seq.degrees[0] == 1
    assert all(g.is_logarithmic(a) for g in seq.generators)
    assert len(seq.degrees) >= 3
    rep = minimal_restriction(a, seq)
    assert rep.t_value >= len(a) - seq.d_max


@SET
@given(polys(degree=2), polys(degree=2), polys(degree=2))
def test_derivation_leibniz(p, q, r):
    theta = Derivation([p, q, r])
    f = MultiPoly.linear([1, 2, 3])
    g = MultiPoly.linear([0, 1, -1])
    assert theta(f * g) == theta(f) * g + f * theta(g)
