import random
from fractions import Fraction

import pytest

from coxwo import Scalar
from coxwo.coxsys import vadd
from coxwo.rootstore import (
    RootStore,
    dihedral_interval,
    height,
    normalize,
    span_coefficients,
    subsystem,
)
from helpers_oracles import reflection_order


def vec(sys, coords):
    return tuple(Scalar(Fraction(c)) for c in coords)


def rt2(a, b):
    return Scalar(Fraction(a), Fraction(b), 2)


class TestGenerate:
    def test_a2_depth_one_has_all_three_roots(self, a2):
        store = RootStore(a2).generate(1)
        vecs = {r.vec for r in store.roots}
        assert vecs == {vec(a2, (1, 0)), vec(a2, (0, 1)), vec(a2, (1, 1))}
        assert store.generate(5).is_complete()
        assert len(store) == 3

    def test_dihedral_pattern(self, dihedral):
        store = RootStore(dihedral).generate(3)
        vecs = {r.vec for r in store.roots}
        expected = set()
        for n in range(4):
            expected.add(vec(dihedral, (n + 1, n)))
            expected.add(vec(dihedral, (n, n + 1)))
        assert vecs == expected

    def test_unit_norm_invariant(self, a2t):
        store = RootStore(a2t).generate(5)
        for r in store.roots:
            assert a2t.bilinear(r.vec, r.vec) == Scalar(1)

    def test_depth_monotone_indices(self, c2t):
        store = RootStore(c2t).generate(6)
        depths = [r.depth for r in store.roots]
        assert depths == sorted(depths)

    def test_deterministic_order(self, uni3):
        s1 = RootStore(uni3).generate(4)
        s2 = RootStore(uni3).generate(4)
        assert [r.vec for r in s1.roots] == [r.vec for r in s2.roots]


class TestNormalize:
    def test_simple_root(self, dihedral):
        assert normalize(vec(dihedral, (1, 0))) == vec(dihedral, (1, 0))

    def test_two_one(self, dihedral):
        assert normalize(vec(dihedral, (2, 1))) == tuple(
            Scalar(f) for f in (Fraction(2, 3), Fraction(1, 3))
        )

    def test_universal_limit_point(self, uni3):
        # s(alpha_r + alpha_t) = alpha_r + 4 alpha_s + alpha_t, an isotropic vector
        v = uni3.reflect_simple(1, vadd(uni3.simple_root("r"), uni3.simple_root("t")))
        assert v == vec(uni3, (1, 4, 1))
        assert uni3.bilinear(v, v).is_zero()
        assert normalize(v) == tuple(
            Scalar(f) for f in (Fraction(1, 6), Fraction(2, 3), Fraction(1, 6))
        )

    def test_normalized_in_simplex(self, c2t):
        store = RootStore(c2t).generate(6)
        one = Scalar(1)
        for r in store.roots:
            n = normalize(r.vec)
            assert all(c.sign() >= 0 and (c - one).sign() <= 0 for c in n)
            assert height(n) == one


class TestDihedralInterval:
    def test_a2_simple_pair(self, a2):
        store = RootStore(a2)
        res = dihedral_interval(store, vec(a2, (1, 0)), vec(a2, (0, 1)))
        assert res.finite
        assert res.members == [vec(a2, (1, 0)), vec(a2, (1, 1)), vec(a2, (0, 1))]

    def test_infinite_dihedral_pair(self, dihedral):
        store = RootStore(dihedral)
        res = dihedral_interval(store, vec(dihedral, (1, 0)), vec(dihedral, (0, 1)))
        assert not res.finite
        assert vec(dihedral, (2, 1)) in res.members
        assert vec(dihedral, (1, 2)) in res.members

    def test_c2_tilde_gamma_pair_finite(self, c2t):
        store = RootStore(c2t)
        gamma = c2t.simple_root("g")
        s_g_beta = c2t.reflect_simple(2, c2t.simple_root("b"))
        res = dihedral_interval(store, gamma, s_g_beta)
        assert res.finite
        # the -sqrt(2)/2 pair value holds for (alpha, s_g(beta))
        assert c2t.bilinear(c2t.simple_root("a"), s_g_beta) == rt2(0, Fraction(-1, 2))

    def test_orthogonal_pair_interval_is_complete(self, c2t):
        # cone(alpha, s_b(alpha)) also contains s_a(beta), which reflections of
        # the endpoints alone never reach (the endpoints are B-orthogonal)
        store = RootStore(c2t)
        alpha = c2t.simple_root("a")
        s_b_alpha = c2t.reflect_simple(1, alpha)
        s_a_beta = c2t.reflect_simple(0, c2t.simple_root("b"))
        assert c2t.bilinear(alpha, s_b_alpha).is_zero()
        res = dihedral_interval(store, alpha, s_b_alpha)
        assert res.finite
        assert res.members == [alpha, s_a_beta, s_b_alpha]

    def test_infinitude_matches_reflection_order(self, a2t, c2t):
        # finite product order forces a finite interval; for B < 1 the two
        # notions coincide, while B >= 1 pairs (parallel mirrors) have
        # infinite order but a finite interval
        rng = random.Random(11)
        for sys in (a2t, c2t):
            store = RootStore(sys).generate(4)
            roots = [r.vec for r in store.roots]
            for _ in range(25):
                a, b = rng.sample(roots, 2)
                res = dihedral_interval(store, a, b)
                order = reflection_order(sys, a, b)
                bval = sys.bilinear(a, b)
                if order is not None:
                    assert res.finite
                if (bval - 1).sign() < 0:
                    assert res.finite == (order is not None)
                else:
                    assert res.finite and order is None

    def test_members_are_closed_under_rescan(self, a2t):
        store = RootStore(a2t).generate(8)
        alpha = a2t.simple_root("a")
        beta = vec(a2t, (1, 1, 0))
        first = dihedral_interval(store, alpha, beta).members
        store.generate(10)
        second = dihedral_interval(store, alpha, beta).members
        assert first == second


class TestSubsystem:
    def test_rank3_universal_embedded_rank4(self, uni3):
        r, t = uni3.simple_root("r"), uni3.simple_root("t")
        s_r = uni3.reflect_simple(1, r)
        s_t = uni3.reflect_simple(1, t)
        simples, sub = subsystem(uni3, [s_r, s_t, r, t], depth_budget=3)
        assert sorted(simples) == sorted([r, t, s_r, s_t])
        values = sorted(
            uni3.bilinear(u, v) for i, u in enumerate(simples) for v in simples[i + 1 :]
        )
        assert values == [Scalar(-3), Scalar(-3), Scalar(-1), Scalar(-1), Scalar(-1), Scalar(-1)]

    def test_rank4_classical_kernel_subsystem(self, rank4_embedded):
        sys = rank4_embedded
        names = sys.generators  # r, s, t, u
        r_u = sys.reflect_simple(0, sys.simple_root("u"))
        r_t = sys.reflect_simple(0, sys.simple_root("t"))
        s_u = sys.reflect_simple(1, sys.simple_root("u"))
        s_t = sys.reflect_simple(1, sys.simple_root("t"))
        expected = sorted([r_u, r_t, s_u, s_t])
        simples, _ = subsystem(sys, [r_u, r_t, s_u, s_t], depth_budget=3)
        assert sorted(simples) == expected
        cross = {
            (i, j): sys.bilinear(u, v)
            for i, u in enumerate(expected)
            for j, v in enumerate(expected)
            if i < j
        }
        assert sorted(cross.values()).count(Scalar(-3)) == 2

    def test_single_generator(self, a2):
        simples, sub = subsystem(a2, [a2.simple_root("s1")])
        assert simples == [a2.simple_root("s1")]
        assert len(sub.generate(3)) == 1

    def test_parabolic_c2_has_four_positive_roots(self, c2t):
        simples, sub = subsystem(c2t, [c2t.simple_root("a"), c2t.simple_root("b")])
        sub.generate(8)
        assert sub.is_complete()
        assert len(sub) == 4


class TestSpanCoefficients:
    def test_exact_solution(self, c2t):
        alpha = c2t.simple_root("a")
        beta = c2t.simple_root("b")
        gamma = vadd(alpha, tuple(rt2(0, 1) * c for c in beta))
        a, b = span_coefficients(alpha, beta, gamma)
        assert a == Scalar(1) and b == rt2(0, 1)

    def test_not_in_span(self, c2t):
        assert (
            span_coefficients(
                c2t.simple_root("a"), c2t.simple_root("b"), c2t.simple_root("g")
            )
            is None
        )
