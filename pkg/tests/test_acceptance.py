"""Acceptance suite: one PASS/FAIL line per criterion."""

import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from arrlog.arrangement import Arrangement, Hyperplane, parse_arrangement
from arrlog.exactmath import kernel_basis, rank
from arrlog.families import b_n, boolean, braid3, generic, square_diag, square_prime, star_plus, star7
from arrlog.graphic import (check_tri_bound, crosscheck_graphic_t, graphic_arrangement,
                            parse_graph)
from arrlog.hypersolvable import (check_hypbound, find_filtration, hyperexponents, quadratic_poincare,
                                  restriction_identity)
from arrlog.lattice import char_poly, integer_roots, poly_from_roots
from arrlog.logder import (addition_generators, degree_sequence, graded_dim, is_free, minimality_drops,
                           check_nonfree_criterion, span_dim)
from arrlog.restriction import check_unequal, minimal_restriction
from oracles import naive_kernel_dim, naive_rank

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok
    return emit


def corpus_arrangements():
    out = {p.stem: parse_arrangement(p.read_text()) for p in sorted(CORPUS.glob("*.arr"))}
    return out


def corpus_graphs(max_vertices=None):
    out = {}
    for p in sorted(CORPUS.glob("*.graph")):
        g = parse_graph(p.read_text())
        if max_vertices is None or g.num_vertices <= max_vertices:
            out[p.stem] = g
    return out


def random_rank3(rng, max_size=8):
    while True:
        hs = set()
        n = rng.randint(4, max_size)
        while len(hs) < n:
            v = [rng.randint(-3, 3) for _ in range(3)]
            if any(v):
                hs.add(Hyperplane(v))
        a = Arrangement(3, sorted(hs, key=lambda h: h.coeffs))
        if a.is_essential():
            return a


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def test_criterion_1_degree_sequences(report, k26_sequence):
    results = []
    seq, dt = timed(degree_sequence, star_plus())
    results.append(("star+", seq.full_degrees(), (1, 3, 3, 4), dt))
    seq, dt = timed(degree_sequence, square_prime())
    results.append(("A'", seq.full_degrees(), (1, 2, 2, 2), dt))
    for n in range(1, 5):
        seq, dt = timed(degree_sequence, b_n(n))
        results.append((f"B_{n}", seq.full_degrees(), (1, 2, n + 1, n + 1), dt))
    results.append(("K_2,6", k26_sequence.degrees, (1, 2, 2, 2, 2, 2, 2, 6), k26_sequence.elapsed))
    free = is_free(square_diag())
    ok = all(got == want and dt <= 60 for _, got, want, dt in results)
    ok = ok and free.free and free.exponents == (1, 2, 2) and free.determinant == \
        square_diag().defining_poly().scale(free.scalar)
    slowest = max(results, key=lambda r: r[3])
    report(1, ok, f"{len(results)} sequences exact, A'+(x-y) free (1,2,2) by Saito; slowest {slowest[0]} "
                  f"{slowest[3]:.1f}s")
    assert ok, results


def test_criterion_2_characteristic_polynomial(report):
    chi = char_poly(star7())
    verdict = check_nonfree_criterion(star7().add((0, 1, 0)), (0, 1, 0)).verdict
    ok = chi == poly_from_roots([1, 3, 3]) and verdict == "not_free"
    report(2, ok, f"chi = {chi}, deletion criterion verdict {verdict}")
    assert ok


def test_criterion_3_minimal_restriction(report):
    cases = [("star+", star_plus(), 2), ("braid", braid3(), 4)]
    cases += [(f"B_{n}", b_n(n), 2) for n in range(1, 5)]
    cases += [(f"generic {n}", generic(n), n - 2) for n in (4, 5, 6)]
    got = [(name, minimal_restriction(a).t_value, t) for name, a, t in cases]
    ok = all(g == t for _, g, t in got)
    report(3, ok, ", ".join(f"{n}={g}" for n, g, _ in got))
    assert ok, got


def test_criterion_4_inequality(report, k26_sequence):
    violations, checked = [], 0
    for name, a in corpus_arrangements().items():
        rep = check_unequal(a, degree_sequence(a))
        checked += 1
        if rep.slack < 0:
            violations.append(name)
    for name, g in corpus_graphs().items():
        a = graphic_arrangement(g)
        if a.ambient_dim < 3:
            continue
        seq = k26_sequence if name == "bipartite12" else degree_sequence(a)
        rep = check_unequal(a, seq)
        checked += 1
        if rep.slack < 0:
            violations.append(name)
    rng = random.Random(2024)
    for i in range(50):
        a = random_rank3(rng)
        seq = degree_sequence(a)
        assert not seq.truncated
        checked += 1
        if check_unequal(a, seq).slack < 0:
            violations.append(f"random {i}")
    ok = not violations
    report(4, ok, f"{checked} arrangements, {len(violations)} violations")
    assert ok, violations


def test_criterion_5_addition(report):
    res = addition_generators(square_prime(), [(1, -1, 0)], verify_up_to=6)
    a = square_diag()
    dims = [(e, span_dim(res.generators, e), graded_dim(a, e).dim) for e in range(7)]
    ok = res.degrees == [1, 2, 2, 3] and all(x == y for _, x, y in dims)
    report(5, ok, f"degrees {res.degrees}, graded match up to 6: {[d for _, _, d in dims]}")
    assert ok


GRAPH_NOTE = ("the four-case formula ignores triangle flats (three hyperplanes through one codim-2 flat); "
              "it overstates t on K3, paw and bull, see the decisions ledger")


@pytest.mark.xfail(strict=True, reason=GRAPH_NOTE)
def test_criterion_6_graphic_formula(report):
    graphs = corpus_graphs(max_vertices=7)
    assert len(graphs) >= 15
    rows = {name: crosscheck_graphic_t(g) for name, g in graphs.items()}
    bad = sorted(name for name, r in rows.items() if not r.agree)
    ok = not bad
    report(6, ok, f"closed formula vs search on {len(rows)} graphs; mismatches: {bad or 'none'}")
    assert ok, {n: (rows[n].formula, rows[n].search) for n in bad}


def test_criterion_6_tri_bound_tightness(report, k26_sequence):
    graphs = corpus_graphs()
    five = check_tri_bound(graphs["fivevertex"], degree_sequence(graphic_arrangement(graphs["fivevertex"])))
    k25 = check_tri_bound(graphs["k25"], degree_sequence(graphic_arrangement(graphs["k25"])))
    k26 = check_tri_bound(graphs["bipartite12"], k26_sequence)
    corrected = all(r.corrected == r.search for r in map(crosscheck_graphic_t, corpus_graphs(7).values()))
    ok = k26.tight and k25.tight and five.slack == 1 and corrected
    report("6 (Tri bound)", ok, f"bipartite tight (d=Tri={k26.tri}, K_2,5 too), five-vertex slack {five.slack}; "
                                f"triangle-aware formula matches search on all corpus graphs: {corrected}")
    assert ok


def test_criterion_7_hypersolvable(report):
    hyp = hyperexponents(star_plus()).values
    qp_ok = all(quadratic_poincare(a) == quadratic_poincare(a, "filtration") for a in (star_plus(), boolean(3)))
    steps = 0
    identity_ok = True
    for a in list(corpus_arrangements().values()):
        for rev in (False, True):
            res = find_filtration(a, reverse=rev)
            if res.filtration is None:
                continue
            for level, _, restr, lower in restriction_identity(res.filtration):
                if level > 0:
                    steps += 1
                    identity_ok &= restr == lower
    bound = check_hypbound(star_plus())
    ok = hyp == (1, 1, 2, 2) and qp_ok and identity_ok and bound.slack == 3
    report(7, ok, f"hypexp {hyp}, QP methods agree {qp_ok}, restriction identity on {steps} steps, "
                  f"bound slack {bound.slack}")
    assert ok


def test_criterion_8_properties(report):
    # Terao factorization on certified free corpus members
    free = 0
    for a in corpus_arrangements().values():
        res = is_free(a)
        if res.free:
            free += 1
            assert integer_roots(char_poly(a)) == sorted(res.exponents)
    # deletion monotonicity on nested pairs
    rng = random.Random(7)
    for _ in range(30):
        a = random_rank3(rng)
        k = rng.randint(1, len(a) - 3)
        b = a.subarrangement(sorted(rng.sample(range(len(a)), len(a) - k)))
        assert degree_sequence(b).d_max <= degree_sequence(a).d_max
    # sampled graded basis members preserve Q
    pool = list(corpus_arrangements().values())
    for _ in range(100):
        a = rng.choice(pool)
        d = rng.randint(1, 4)
        basis = graded_dim(a, d).basis
        if not basis:
            continue
        theta = rng.choice(basis)
        q = a.defining_poly()
        assert theta(q).divmod(q)[1].is_zero()
    # kernel and rank against plain Gauss-Jordan
    for _ in range(200):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        if rng.random() < 0.5 and r > 1:
            m[-1] = [x + y for x, y in zip(m[0], m[1 % r])]
        assert rank(m) == naive_rank(m)
        assert len(kernel_basis(m, c)) == naive_kernel_dim(m, c)
    report(8, True, f"Terao on {free} free members, 30 nested pairs, 100 sampled derivations, 200 matrices")


def test_criterion_9_minimality(report, k26_sequence):
    checked = 0
    for name, a in corpus_arrangements().items():
        for d, full, rest in minimality_drops(a, degree_sequence(a)):
            assert rest < full, (name, d)
            checked += 1
    for name, g in corpus_graphs().items():
        a = graphic_arrangement(g)
        seq = k26_sequence if name == "bipartite12" else degree_sequence(a)
        for d, full, rest in minimality_drops(a, seq):
            assert rest < full, (name, d)
            checked += 1
    report(9, True, f"{checked} generators each strictly needed")
