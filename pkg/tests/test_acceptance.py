"""Acceptance criteria, one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they
complete.  Every numeric claim is checked at its stated tolerance; elapsed
time is asserted against each criterion's budget.
"""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from coxwo import Scalar
from coxwo.convexity import classify, cone_closure, in_hull
from coxwo.coxsys import gram_kernel
from coxwo.imagcone import build_K, imaginary_region, probe_orbit_vs_inversions
from coxwo.infwords import InvStream, compare, parse_infword, truncate_inversions, word_prefix_of
from coxwo.rootstore import RootStore, normalize
from coxwo.scalar import solve_quadratic
from coxwo.scan import WindowScanner
from coxwo.weakorder import (
    decide_join,
    enumerate_ball,
    finite_group_join,
    inversion_roots,
    inversion_set,
    is_reduced,
    meet,
    parse_word,
    peel,
)


@contextmanager
def criterion(number: int, label: str, bound: float):
    t0 = time.perf_counter()
    failed = False
    try:
        yield
    except BaseException:
        failed = True
        raise
    finally:
        elapsed = time.perf_counter() - t0
        status = "FAIL" if failed or elapsed >= bound else "PASS"
        print(f"\nACCEPTANCE {number} [{label}]: {status} ({elapsed:.2f}s / bound {bound:g}s)")
    assert elapsed < bound, f"criterion {number} exceeded its {bound}s bound"


def vec(sys, coords):
    return tuple(Scalar(Fraction(c)) for c in coords)


def random_reduced_word(sys, rng, max_len):
    letters = ()
    for _ in range(max_len):
        options = [s for s in range(sys.rank) if is_reduced(sys, letters + (s,))]
        if not options:
            break
        letters = letters + (rng.choice(options),)
    return letters


def test_criterion_1_a2_full_lattice(a2):
    with criterion(1, "A2 full lattice", 1.0):
        store = RootStore(a2)
        ball = enumerate_ball(store, 10)
        assert len(ball) == 6
        by_words = {el.letters: frozenset(store.roots[i].vec for i in el.inversions)
                    for el in ball}
        a1, a2r, high = vec(a2, (1, 0)), vec(a2, (0, 1)), vec(a2, (1, 1))
        expected = {
            (): frozenset(),
            (0,): frozenset({a1}),
            (1,): frozenset({a2r}),
            (0, 1): frozenset({a1, high}),
            (1, 0): frozenset({a2r, high}),
            (0, 1, 0): frozenset({a1, a2r, high}),
        }
        # one representative word per element; braid twins share inversion sets
        seen = {}
        for letters, inv in by_words.items():
            seen[inv] = letters
        assert set(seen.keys()) == set(expected.values())

        for e1 in ball:
            for e2 in ball:
                via_w0 = finite_group_join(store, [e1.letters, e2.letters])
                via_search = decide_join(store, [e1.letters, e2.letters])
                assert via_search.kind == "exists"
                assert via_search.inversions == frozenset(inversion_roots(a2, via_w0))

        assert meet(a2, [parse_word(a2, "s1.s2"), parse_word(a2, "s2.s1")]) == ()

        cls = classify(store, [high], depth=3)
        assert cls.closed.value and cls.closed.exact
        assert not cls.coclosed.value and cls.coclosed.exact


def test_criterion_2_c2_tilde_joins(c2t):
    with criterion(2, "C~2 join pair", 5.0):
        store = RootStore(c2t)
        exists = decide_join(store, [parse_word(c2t, "a"), parse_word(c2t, "g.b")])
        assert exists.kind == "exists"
        assert len(exists.inversions) == 5
        reference = frozenset(inversion_roots(c2t, parse_word(c2t, "g.a.b.a.b")))
        assert exists.inversions == reference  # equal as group elements

        missing = decide_join(store, [parse_word(c2t, "a"), parse_word(c2t, "b.g")])
        assert missing.kind == "not_exists"
        assert missing.witness_kind == "imaginary_point"
        p = missing.witness_point
        assert all(c2t.gram_with_simple(s, p).is_zero() for s in range(3))
        target = [normalize(v) for v in
                  inversion_roots(c2t, parse_word(c2t, "a"))
                  + inversion_roots(c2t, parse_word(c2t, "b.g"))]
        assert in_hull(p, target).inside  # the certificate re-verifies


def test_criterion_3_infinite_dihedral(dihedral):
    with criterion(3, "infinite dihedral", 1.0):
        word_st = parse_infword(dihedral, "|(s.t)")
        stream = InvStream(dihedral, word_st)
        roots = stream.take(50)
        assert roots == [vec(dihedral, (k + 1, k)) for k in range(50)]

        store = RootStore(dihedral)
        v = decide_join(store, [parse_word(dihedral, "s"), parse_word(dihedral, "t")])
        assert v.kind == "not_exists"

        word_ts = parse_infword(dihedral, "|(t.s)")
        got = compare(dihedral, word_st, word_ts)
        assert got.relation == "incomparable" and got.exact


def test_criterion_4_rank3_counterexample(uni3):
    with criterion(4, "embedded rank-4 biclosed not biconvex", 10.0):
        from coxwo.rootstore import subsystem

        r, t = uni3.simple_root("r"), uni3.simple_root("t")
        s_r = uni3.reflect_simple(1, r)
        s_t = uni3.reflect_simple(1, t)
        simples, _ = subsystem(uni3, [s_r, s_t, r, t], depth_budget=2)
        values = sorted(
            uni3.bilinear(u, v) for i, u in enumerate(simples) for v in simples[i + 1 :]
        )
        assert values == [Scalar(-3), Scalar(-3)] + [Scalar(-1)] * 4

        ts_ar = uni3.apply_word((2, 1), uni3.simple_root("r"))
        assert ts_ar == vec(uni3, (1, 2, 6))
        s_at = uni3.reflect_simple(1, t)
        recombined = tuple(
            a + b + c
            for a, b, c in zip(r, tuple(Scalar(5) * x for x in t), s_at)
        )
        assert recombined == ts_ar  # alpha_r + 5 alpha_t + s(alpha_t)

        # Phi_I window at depth 8 inside Phi' (the index-2 reflection subgroup)
        ambient = RootStore(uni3).generate(8)
        labels = {uni3.simple_root(i): name for i, name in enumerate(uni3.generators)}
        for depth in range(1, ambient.frontier_depth + 1):
            for root in ambient.depth_slice(depth):
                for s in range(3):
                    img = uni3.reflect_simple(s, root.vec)
                    if img in labels:
                        labels[root.vec] = labels[img]
                        break
        universe = [root.vec for root in ambient.roots if labels[root.vec] != "s"]
        sub = RootStore(uni3, simples=[t, r, s_at]).generate(9)
        window_vecs = set(r_.vec for r_ in ambient.roots)
        members = [r_ for r_ in sub.roots if r_.vec in window_vecs]
        assert max(m.depth for m in members) <= 8  # margin inside the sub store
        phi_i = [m.vec for m in members]

        cls = classify(ambient, phi_i, depth=8, truncated=True,
                       universe=universe, pool=universe)
        assert cls.biclosed.value and not cls.biclosed.exact  # window verdict
        assert not cls.biconvex.value
        assert cls.convex.witness == ts_ar
        assert ts_ar in set(universe) and ts_ar not in set(phi_i)


def test_criterion_5_a3_tilde_not_separable(a3t):
    with criterion(5, "A~3 biconvex not separable", 30.0):
        delta = vec(a3t, (1, 1, 1, 1))
        assert all(a3t.gram_with_simple(s, delta).is_zero() for s in range(4))
        delta_hat = normalize(delta)

        x1 = parse_word(a3t, "s2.s1.s3.s2.s1")
        x2 = parse_word(a3t, "s2.s1.s4")
        n_x = inversion_roots(a3t, x1) + inversion_roots(a3t, x2)
        n_x = sorted(set(n_x))
        assert in_hull(delta_hat, [normalize(v) for v in n_x]).inside

        store = RootStore(a3t)
        closure = cone_closure(store, n_x, depth=8)
        window = [r.vec for r in store.window(8)]
        complement = [normalize(v) for v in window if v not in set(closure)]
        assert in_hull(delta_hat, complement).inside  # not separable both ways

        cls = classify(store, closure, depth=8, truncated=True)
        assert cls.biconvex.value and not cls.biconvex.exact

        verdict = decide_join(store, [x1, x2])
        assert verdict.kind in ("not_exists", "unknown")
        assert verdict.kind != "exists"


def test_criterion_6_a2_tilde_infinite_words(a2t):
    with criterion(6, "A~2 infinite words", 1.0):
        om = parse_infword(a2t, "|(a.b.g)")
        omp = parse_infword(a2t, "b|(a.b.g)")
        got = compare(a2t, om, omp)
        assert got.relation == "less"
        back = compare(a2t, omp, om)
        assert back.relation == "greater"

        ans = word_prefix_of(a2t, parse_word(a2t, "b"), om)
        assert ans.value is False and ans.exact

        s_om = InvStream(a2t, om)
        s_omp = InvStream(a2t, omp)
        n = 40
        left = s_omp.take(n + 1)
        right = [a2t.simple_root("b")] + [a2t.reflect_simple(1, v) for v in s_om.take(n)]
        assert left == right  # index-aligned shift identity


def test_criterion_7_property_suite(a2, dihedral, a2t, c2t, uni3, fig6):
    systems = [
        ("a2", a2),
        ("dihedral", dihedral),
        ("a2_tilde", a2t),
        ("c2_tilde", c2t),
        ("universal3", uni3),
        ("fig6", fig6),
    ]
    with criterion(7, "property suite", 300.0):
        rng = random.Random(7)

        # (a) peel inverts inversion sets
        for name, sys in systems:
            for _ in range(200):
                w = random_reduced_word(sys, rng, rng.randint(0, 12))
                roots = inversion_roots(sys, w)
                res = peel(sys, roots)
                assert res.word is not None, (name, w)
                assert sorted(inversion_roots(sys, res.word)) == sorted(roots)

        # (b) disjoint-union law on random factorizations
        stores = {name: RootStore(sys) for name, sys in systems}
        from coxwo.weakorder import concat_inversions

        for name, sys in systems:
            store = stores[name]
            for _ in range(200):
                w = random_reduced_word(sys, rng, rng.randint(0, 10))
                cut = rng.randint(0, len(w))
                got = concat_inversions(store, w[:cut], w[cut:])
                assert got == inversion_set(store, w), (name, w, cut)

        # (c) biclosed = biconvex = separable = peel success on all window subsets
        for name, sys in systems:
            scanner = WindowScanner(sys, window_depth=4, store=stores[name])
            report = scanner.scan_subsets(max_size=4, name=name)
            assert report.violations == [], name
            assert report.window_unresolved == [], name

        # (d) decide_join against the brute-force minimal-upper-bound oracle
        for name, sys in systems:
            store = stores[name]
            ball = enumerate_ball(store, 10)
            pairs = [(el.letters, el.inversions) for el in ball]
            disagreements = 0
            for _ in range(100):
                (u, nu), (w, nw) = rng.sample(pairs, 2)
                target = nu | nw
                uppers = [inv for _, inv in pairs if target <= inv]
                verdict = decide_join(store, [u, w])
                if uppers:
                    best = min(len(inv) for inv in uppers)
                    minimal = [inv for inv in uppers if len(inv) == best]
                    assert len(minimal) == 1, name
                    want = frozenset(store.roots[i].vec for i in minimal[0])
                    if verdict.kind != "exists" or verdict.inversions != want:
                        disagreements += 1
                elif verdict.kind == "exists":
                    target_vecs = frozenset(store.roots[i].vec for i in target)
                    if not target_vecs <= verdict.inversions:
                        disagreements += 1
            assert disagreements == 0, name


def test_criterion_8_limit_and_imaginary_probes(dihedral, a2t, fig6):
    with criterion(8, "limit and imaginary probes", 60.0):
        from coxwo.imagcone import limit_root_sample

        # dihedral limit cluster at the radical direction
        clusters = limit_root_sample(RootStore(dihedral), depth=30, tol=0.05)
        assert len(clusters) == 1
        cx, cy = clusters[0]["center"]
        assert abs(cx - 0.5) < 1e-6 and abs(cy - 0.5) < 1e-6

        # A~2: the imaginary domain is exactly the normalized radical point
        dom = build_K(a2t)
        assert dom.kind == "point"
        assert dom.interior_point == tuple(Scalar(Fraction(1, 3)) for _ in range(3))
        kernel = gram_kernel(a2t)
        assert len(kernel) == 1 and normalize(kernel[0]) == dom.interior_point

        # all-(-6/5) system: centroid strictly interior with exact slack value
        dom6 = build_K(fig6)
        centroid = tuple(Scalar(Fraction(1, 3)) for _ in range(3))
        assert dom6.kind == "interior" and dom6.interior_point == centroid
        for s in range(3):
            assert fig6.gram_with_simple(s, centroid) == Scalar(Fraction(-7, 15))

        # orbit and inversion sequences of (a.b)^infinity meet at one point
        word = parse_infword(fig6, "|(a.b)")
        report = probe_orbit_vs_inversions(fig6, word.letters(), dom6.interior_point, n=1000)
        assert report["final_distance"] < 1e-4
        assert len(report["orbit_clusters"]) == 1
        assert len(report["inversion_clusters"]) == 1
        limit = report["orbit_clusters"][0]["center"]
        assert abs(limit[2]) < 1e-9  # stays inside the a-b edge

        # the rank-2 limit direction, exactly: t along the edge solves
        # (22/5)t^2 - (22/5)t + 1 = 0 in Q(sqrt 11)
        roots_t = solve_quadratic(Fraction(22, 5), Fraction(-22, 5), Fraction(1))
        best = min(roots_t, key=lambda t: abs(t.to_float() - limit[1]))
        assert abs(best.to_float() - limit[1]) < 1e-4
        direction = (Scalar(1) - best, best, Scalar(0))
        assert fig6.bilinear(direction, direction).is_zero()
