import random

import pytest

from arrlog.arrangement import Arrangement, Hyperplane
from arrlog.families import b_n, braid3, generic, square_prime, star_plus, star7
from arrlog.logder import InvariantError, degree_sequence
from arrlog.restriction import candidate_hyperplanes, check_two_points, check_unequal, minimal_restriction
from oracles import brute_restriction


def cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def sampled_minimum(a, seed, count=1000):
    """Lowest |(A u H)^H| over random planes, many forced through intersection points."""
    rng = random.Random(seed)
    rows = [list(r) for r in a.rows()]
    points = []
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            p = cross(rows[i], rows[j])
            if any(p):
                points.append(p)
    best = len(a)
    for _ in range(count):
        kind = rng.random()
        if kind < 0.5 and len(points) > 1:
            form = cross(*rng.sample(points, 2))
        elif kind < 0.85 and points:
            q = [rng.randint(-6, 6) for _ in range(3)]
            form = cross(rng.choice(points), q)
        else:
            form = [rng.randint(-6, 6) for _ in range(3)]
        if not any(form) or Hyperplane(form) in a:
            continue
        best = min(best, brute_restriction(rows, form))
    return best


@pytest.mark.parametrize("a, t", [
    (star_plus(), 2), (braid3(), 4), (b_n(1), 2), (b_n(2), 2), (b_n(3), 2), (b_n(4), 2),
    (generic(4), 2), (generic(5), 3), (generic(6), 4),
])
def test_minimal_restriction_values(a, t):
    rep = minimal_restriction(a)
    assert rep.t_value == t
    assert rep.witness not in a
    assert brute_restriction(a.rows(), rep.witness.coeffs) == t


@pytest.mark.parametrize("a", [star_plus(), braid3(), b_n(2), generic(5), star7(), square_prime()])
def test_sampling_never_beats_candidates(a):
    t = minimal_restriction(a).t_value
    assert sampled_minimum(a, seed=len(a)) >= t


def test_random_arrangements_sampling():
    rng = random.Random(5)
    for _ in range(10):
        rows = set()
        while len(rows) < rng.randint(4, 7):
            v = [rng.randint(-2, 2) for _ in range(3)]
            if any(v):
                rows.add(Hyperplane(v))
        a = Arrangement(3, sorted(rows, key=lambda h: h.coeffs))
        if not a.is_essential():
            continue
        t = minimal_restriction(a).t_value
        assert sampled_minimum(a, seed=1, count=300) >= t


def test_candidates_exclude_members():
    a = star_plus()
    assert all(h not in a for h in candidate_hyperplanes(a))


def test_generic_four_uses_a_diagonal():
    a = generic(4)
    rep = minimal_restriction(a)
    # the diagonal through two opposite double points of the quadrilateral
    assert rep.contained_flats == 2
    assert rep.r_value == 2


def test_star_plus_witness_contains_both_triple_points():
    rep = minimal_restriction(star_plus())
    assert rep.contained_flats >= 2


@pytest.mark.parametrize("a, slack", [(b_n(2), 0), (b_n(4), 0), (braid3(), 1), (star_plus(), 0)])
def test_inequality(a, slack):
    rep = check_unequal(a, degree_sequence(a))
    assert rep.slack == slack


def test_inequality_refuses_truncated():
    with pytest.raises(ValueError):
        check_unequal(star_plus(), degree_sequence(star_plus(), 2))


def test_inequality_raises_on_fake_violation():
    seq = degree_sequence(star_plus())
    seq.degrees = (1, 1, 1)  # pretend d = 1
    seq.center = ()
    with pytest.raises(InvariantError):
        check_unequal(star_plus(), seq)


def test_two_points_star_plus():
    rep = check_two_points(star_plus(), degree_sequence(star_plus()))
    assert rep.hypothesis and rep.consistent
    assert rep.t_value == 2 and rep.d_max == 4


def test_two_points_generic_fails_hypothesis():
    assert not check_two_points(generic(5)).hypothesis


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_two_points_b_n(n):
    rep = check_two_points(b_n(n), degree_sequence(b_n(n)))
    assert rep.consistent
    if rep.hypothesis:
        assert rep.t_value == 2


def test_requires_dimension_three():
    with pytest.raises(ValueError):
        minimal_restriction(Arrangement.from_rows([[1, 0], [0, 1], [1, 1]]))
