import itertools
import random
from fractions import Fraction

import pytest

from coxwo import Scalar
from coxwo.convexity import (
    classify,
    cone_closure,
    hull2d,
    in_cone,
    in_hull,
    in_hull2d,
    strictly_separate,
    two_closure,
)
from coxwo.coxsys import vadd
from coxwo.rootstore import RootStore, normalize
from coxwo.weakorder import inversion_roots, parse_word


def vec(sys, coords):
    return tuple(Scalar(Fraction(c)) for c in coords)


def delta_hat(sys, coords):
    return normalize(vec(sys, coords))


class TestInCone:
    def test_sum_of_simples(self, a2):
        res = in_cone(vec(a2, (1, 1)), [vec(a2, (1, 0)), vec(a2, (0, 1))])
        assert res.inside and res.coefficients == [Scalar(1), Scalar(1)]

    def test_embedded_rank4_witness(self, uni3):
        # ts(alpha_r) = alpha_r + 5 alpha_t + s(alpha_t) inside the parabolic cone
        ts_ar = uni3.apply_word((2, 1), uni3.simple_root("r"))
        gens = [uni3.simple_root("t"), uni3.simple_root("r"), vec(uni3, (0, 2, 1))]
        res = in_cone(ts_ar, gens)
        assert res.inside
        # the stated combination itself
        combo = vadd(
            vadd(
                tuple(Scalar(5) * c for c in uni3.simple_root("t")),
                uni3.simple_root("r"),
            ),
            vec(uni3, (0, 2, 1)),
        )
        assert combo == ts_ar

    def test_outside_with_functional(self, dihedral):
        res = in_cone(vec(dihedral, (0, 1)), [vec(dihedral, (1, 0))])
        assert not res.inside
        rho = res.separator
        target_val = sum(
            (a * b for a, b in zip(rho, vec(dihedral, (0, 1)))), Scalar(0)
        )
        gen_val = sum((a * b for a, b in zip(rho, vec(dihedral, (1, 0)))), Scalar(0))
        assert target_val.sign() > 0 >= gen_val.sign()


class TestInHull:
    def test_c2_tilde_delta_inside_top_triangle(self, c2t):
        delta = normalize(vec(c2t, (1, 0, 0)))  # placeholder, replaced below
        # delta spans the radical: (1, sqrt2, 1)
        rt2 = Scalar(0, 1, 2)
        delta = normalize((Scalar(1), rt2, Scalar(1)))
        beta_h = delta_hat(c2t, (0, 1, 0))
        alpha_h = delta_hat(c2t, (1, 0, 0))
        s_b_gamma = normalize(c2t.reflect_simple(1, c2t.simple_root("g")))
        assert in_hull(delta, [beta_h, alpha_h, s_b_gamma]).inside

    def test_c2_tilde_delta_outside_bottom_triangle(self, c2t):
        rt2 = Scalar(0, 1, 2)
        delta = normalize((Scalar(1), rt2, Scalar(1)))
        alpha_h = delta_hat(c2t, (1, 0, 0))
        gamma_h = delta_hat(c2t, (0, 0, 1))
        s_g_beta = normalize(c2t.reflect_simple(2, c2t.simple_root("b")))
        assert not in_hull(delta, [alpha_h, gamma_h, s_g_beta]).inside

    def test_vertex_in_own_hull(self, a2):
        p = delta_hat(a2, (1, 0))
        assert in_hull(p, [p, delta_hat(a2, (0, 1))]).inside


class TestStrictlySeparate:
    def test_inversion_set_from_complement_a2(self, a2):
        ns = [delta_hat(a2, (1, 0)), delta_hat(a2, (1, 1))]  # N(s1 s2)
        comp = [delta_hat(a2, (0, 1))]
        sep = strictly_separate(ns, comp)
        assert sep.hyperplane is not None and sep.gap.sign() > 0
        for p in ns:
            v = sum((a * b for a, b in zip(sep.hyperplane, p)), Scalar(0))
            assert (v - sep.threshold - sep.gap).sign() >= 0
        for q in comp:
            v = sum((a * b for a, b in zip(sep.hyperplane, q)), Scalar(0))
            assert (v - sep.threshold + sep.gap).sign() <= 0

    def test_identical_singletons(self, a2):
        p = delta_hat(a2, (1, 1))
        sep = strictly_separate([p], [p])
        assert sep.hyperplane is None and sep.common_point == p

    def test_blue_triangle_vs_delta(self, c2t):
        rt2 = Scalar(0, 1, 2)
        delta = normalize((Scalar(1), rt2, Scalar(1)))
        tri = [
            delta_hat(c2t, (1, 0, 0)),
            delta_hat(c2t, (0, 0, 1)),
            normalize(c2t.reflect_simple(2, c2t.simple_root("b"))),
        ]
        sep = strictly_separate(tri, [delta])
        assert sep.hyperplane is not None

    def test_duality_with_hull_intersection(self, a2t):
        rng = random.Random(3)
        store = RootStore(a2t).generate(4)
        pts = [normalize(r.vec) for r in store.roots]
        for _ in range(30):
            p = rng.sample(pts, rng.randint(1, 4))
            q = rng.sample(pts, rng.randint(1, 4))
            sep = strictly_separate(p, q)
            common = any(in_hull(x, q).inside for x in p) or any(
                in_hull(x, p).inside for x in q
            )
            if sep.hyperplane is None:
                assert in_hull(sep.common_point, p).inside
                assert in_hull(sep.common_point, q).inside
            else:
                assert not common


class TestTwoClosure:
    def test_a2_simples_close_to_everything(self, a2):
        store = RootStore(a2)
        res = two_closure(store, [vec(a2, (1, 0)), vec(a2, (0, 1))])
        assert res.finite
        assert res.members == sorted([vec(a2, (1, 0)), vec(a2, (0, 1)), vec(a2, (1, 1))])

    def test_infinite_dihedral_witness(self, dihedral):
        store = RootStore(dihedral)
        res = two_closure(store, [vec(dihedral, (1, 0)), vec(dihedral, (0, 1))])
        assert not res.finite
        assert set(res.witness_pair) == {vec(dihedral, (1, 0)), vec(dihedral, (0, 1))}

    def test_singleton(self, a2):
        store = RootStore(a2)
        res = two_closure(store, [vec(a2, (1, 0))])
        assert res.finite and res.members == [vec(a2, (1, 0))]

    def test_indirect_infinitude_in_a2_tilde(self, a2t):
        # pairwise B > -1 at the start, but the added roots force B <= -1
        store = RootStore(a2t)
        simples = [a2t.simple_root(i) for i in range(3)]
        res = two_closure(store, simples)
        assert not res.finite

    def test_idempotent_and_minimal_on_small_instances(self, c2t):
        rng = random.Random(9)
        store = RootStore(c2t).generate(4)
        pts = [r.vec for r in store.roots]
        checked = 0
        for _ in range(20):
            sample = rng.sample(pts, rng.randint(1, 3))
            res = two_closure(store, sample)
            if not res.finite:
                continue
            checked += 1
            again = two_closure(store, res.members)
            assert again.finite and again.members == res.members
            for extra in res.members:
                if extra in sample:
                    continue
                smaller = [v for v in res.members if v != extra]
                sub = two_closure(store, smaller)
                assert (not sub.finite) or sub.members != smaller
        assert checked >= 5


class TestConeClosure:
    def test_c2_tilde_join_cone_has_five_roots(self, c2t):
        store = RootStore(c2t)
        x1 = inversion_roots(c2t, parse_word(c2t, "a"))
        x2 = inversion_roots(c2t, parse_word(c2t, "g.b"))
        closure = cone_closure(store, x1 + x2, depth=8)
        assert len(closure) == 5

    def test_simples_give_whole_window(self, a2t):
        store = RootStore(a2t)
        simples = [a2t.simple_root(i) for i in range(3)]
        window = store.window(5)
        assert len(cone_closure(store, simples, depth=5)) == len(window)

    def test_a3_tilde_never_stabilizes(self, a3t):
        store = RootStore(a3t)
        x1 = inversion_roots(a3t, parse_word(a3t, "s2.s1.s3.s2.s1"))
        x2 = inversion_roots(a3t, parse_word(a3t, "s2.s1.s4"))
        sizes = [len(cone_closure(store, x1 + x2, depth=d)) for d in (6, 8, 10)]
        assert sizes[0] < sizes[1] < sizes[2]


class TestClassify:
    def test_highest_root_closed_not_coclosed(self, a2):
        store = RootStore(a2).generate(3)
        cls = classify(store, [vec(a2, (1, 1))], depth=3)
        assert cls.closed.value and cls.closed.exact
        assert not cls.coclosed.value and cls.coclosed.exact
        assert not cls.biclosed.value

    def test_inversion_set_fully_exact(self, a2):
        store = RootStore(a2).generate(3)
        cls = classify(store, [vec(a2, (1, 0)), vec(a2, (1, 1))], depth=3)
        for name in ("closed", "coclosed", "convex", "coconvex", "separable"):
            flag = getattr(cls, name)
            assert flag.value and flag.exact
        assert cls.biclosed.value and cls.biconvex.value

    def test_simple_pair_not_closed_but_coclosed_in_a2(self, a2):
        store = RootStore(a2).generate(3)
        cls = classify(store, [vec(a2, (1, 0)), vec(a2, (0, 1))], depth=3)
        assert not cls.closed.value and cls.closed.exact
        assert cls.coclosed.value and cls.coclosed.exact  # finite window is total
        assert not cls.separable.value

    def test_exhaustive_equivalence_on_a2(self, a2):
        from coxwo.weakorder import peel

        store = RootStore(a2).generate(3)
        roots = [r.vec for r in store.roots]
        for k in range(4):
            for sub in itertools.combinations(roots, k):
                cls = classify(store, list(sub), depth=3)
                ok = peel(a2, list(sub)).word is not None
                assert cls.biclosed.value == ok
                assert cls.biconvex.value == ok
                assert cls.separable.value == ok


class TestHull2d:
    def test_collinear_returns_segment(self):
        pts = [(Scalar(0), Scalar(0)), (Scalar(1), Scalar(1)), (Scalar(2), Scalar(2))]
        hull = hull2d(pts)
        assert hull == [(Scalar(0), Scalar(0)), (Scalar(2), Scalar(2))]
        assert in_hull2d((Scalar(1), Scalar(1)), hull)
        assert not in_hull2d((Scalar(1), Scalar(0)), hull)

    def test_triangle_membership(self):
        pts = [(Scalar(0), Scalar(0)), (Scalar(4), Scalar(0)), (Scalar(0), Scalar(4))]
        hull = hull2d(pts)
        assert in_hull2d((Scalar(1), Scalar(1)), hull)
        assert in_hull2d((Scalar(2), Scalar(2)), hull)  # on the edge
        assert not in_hull2d((Scalar(3), Scalar(3)), hull)
