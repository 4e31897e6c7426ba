import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from _support import cdf_at, float_gap_grid, random_mixture, stop_loss_by_survival

from uniform_sums.coupling import extremal_sum_distribution
from uniform_sums.decision import Rule, Verdict
from uniform_sums.distributions import (
    Atom,
    MixtureDistribution,
    UniformPiece,
    convex_order_vs_uniform,
    cx_gap,
    max_cx_gap,
    mixture,
    parse_rational,
)

U01 = MixtureDistribution.uniform(0, 1)


class TestConstruction:
    def test_mass_must_be_one(self):
        with pytest.raises(ValueError):
            MixtureDistribution.discrete([(0, F(1, 2))])

    def test_negative_mass_rejected(self):
        with pytest.raises(ValueError):
            Atom(F(0), F(-1))

    def test_degenerate_piece_rejected(self):
        with pytest.raises(ValueError):
            UniformPiece(F(1), F(1), F(1))

    def test_atoms_merge(self):
        d = MixtureDistribution([Atom(F(1), F(1, 2)), Atom(F(1), F(1, 2))])
        assert d.atoms == (Atom(F(1), F(1)),)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            U01.atoms = ()

    def test_parse_rational(self):
        assert parse_rational("3/4") == F(3, 4)
        assert parse_rational(2) == 2
        with pytest.raises((TypeError, ValueError)):
            parse_rational(0.5)


class TestMoments:
    def test_mean_uniform(self):
        assert U01.mean() == F(1, 2)

    def test_mean_symmetric_atoms(self):
        assert MixtureDistribution.discrete([(F(1, 2), F(1, 2)), (F(3, 2), F(1, 2))]).mean() == 1

    def test_mean_extremal_law(self):
        n, u, v = 3, F(1), F(2)
        expected = F(u, n) * u / 2 + (v - u) / n * (u + v) / 2 + (n - v) / n * (n + v) / 2
        assert extremal_sum_distribution(n, u, v).mean() == expected == F(3, 2)

    def test_mean_extremal_law_monte_carlo(self):
        # E[U | cell] for the three cells [0,u), [u,v), [v,n] of U ~ U[0,3]
        rng = random.Random(5)
        u, v = 1, 2
        samples = [rng.uniform(0, 3) for _ in range(200_000)]
        cond = [(x < u and u / 2) or (x < v and (u + v) / 2) or (3 + v) / 2 for x in samples]
        assert abs(sum(cond) / len(cond) - 1.5) < 0.01


class TestStopLoss:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_uniform(self, n):
        d = MixtureDistribution.uniform(0, n)
        for j in range(0, 4 * n + 1):
            k = F(j, 4)
            assert d.stop_loss(k).value == (n - k) ** 2 / (2 * n)

    def test_point_mass(self):
        assert MixtureDistribution.point_mass(1).stop_loss(0).value == 1

    def test_biatomic_between_atoms(self):
        a, b, p = F(1, 3), F(5, 3), F(1, 2)
        d = MixtureDistribution.discrete([(a, p), (b, 1 - p)])
        for k in (a, F(1), F(3, 2), b):
            assert d.stop_loss(k).value == (b - k) * (1 - p)

    def test_matches_survival_integral(self):
        rng = random.Random(11)
        for _ in range(100):
            d = random_mixture(rng, rng.randint(2, 4))
            lo, hi = d.support_bounds()
            for k in {lo, hi, (lo + hi) / 2, lo + (hi - lo) / 3, *d.breakpoints()}:
                assert d.stop_loss(k).value == stop_loss_by_survival(d, k)

    def test_below_support_is_linear(self):
        d = MixtureDistribution.uniform(1, 2)
        assert d.stop_loss(0).value == d.mean()
        assert d.stop_loss(-5).value == d.mean() + 5


class TestCdfQuantile:
    def test_quantile_examples(self):
        assert U01.quantile(F(1, 2)) == F(1, 2)
        d = MixtureDistribution.discrete([(0, F(1, 2)), (1, F(1, 2))])
        assert d.quantile(F(1, 2)) == 0
        assert d.quantile(F(3, 4)) == 1

    def test_quantile_domain(self):
        with pytest.raises(ValueError):
            U01.quantile(0)
        with pytest.raises(ValueError):
            U01.quantile(F(3, 2))

    def test_cdf_matches_reference(self):
        rng = random.Random(2)
        for _ in range(50):
            d = random_mixture(rng, 3)
            for x in d.breakpoints():
                assert d.cdf(x) == cdf_at(d, x)

    def test_galois_connection(self):
        # Q(t) <= x  iff  t <= F(x)
        rng = random.Random(4)
        for _ in range(40):
            d = random_mixture(rng, 2)
            xs = sorted(set(d.breakpoints()))
            xs += [(p + q) / 2 for p, q in zip(xs, xs[1:])]
            for j in range(1, 13):
                t = F(j, 12)
                qt = d.quantile(t)
                for x in xs:
                    assert (qt <= x) == (t <= d.cdf(x))

    def test_interval_probabilities(self):
        d = MixtureDistribution([Atom(F(1), F(1, 2))], [UniformPiece(F(0), F(2), F(1, 2))])
        assert d.prob_open(0, 1) == F(1, 4)
        assert d.prob_closed(0, 1) == F(3, 4)
        assert d.cdf_left(1) == F(1, 4)


class TestScaleShift:
    def test_examples(self):
        assert U01.scale_shift(2, 0) == MixtureDistribution.uniform(0, 2)
        assert U01.scale_shift(-1, 1) == U01
        d = MixtureDistribution.discrete([(F(1, 3), F(1, 4)), (F(5, 3), F(3, 4))])
        r = d.scale_shift(-1, 2)
        assert r == MixtureDistribution.discrete([(F(1, 3), F(3, 4)), (F(5, 3), F(1, 4))])

    def test_zero_scale_rejected(self):
        with pytest.raises(ValueError):
            U01.scale_shift(0, 1)

    def test_equals_in_law_splits_pieces(self):
        split = MixtureDistribution.step_density([(0, F(1, 2), F(1, 2)), (F(1, 2), 1, F(1, 2))])
        assert split.equals_in_law(U01)
        assert not split.equals_in_law(MixtureDistribution.uniform(0, 2))

    def test_mixture(self):
        m = mixture([U01, MixtureDistribution.point_mass(1)], [F(1, 2), F(1, 2)])
        assert m.mean() == F(3, 4)


@given(st.integers(1, 40), st.integers(1, 40), st.integers(-5, 5), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_affine_moments(p, q, shift, scale):
    d = MixtureDistribution([Atom(F(p, q), F(1, 2))], [UniformPiece(F(0), F(1), F(1, 2))])
    s = d.scale_shift(scale, shift)
    assert s.mean() == scale * d.mean() + shift
    assert s.second_moment() - s.mean() ** 2 == scale**2 * (d.second_moment() - d.mean() ** 2)


class TestConvexOrder:
    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_reflexive(self, n):
        assert convex_order_vs_uniform(MixtureDistribution.uniform(0, n), n).is_member

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_point_mass_at_mean(self, n):
        assert convex_order_vs_uniform(MixtureDistribution.point_mass(F(n, 2)), n).is_member

    def test_extreme_biatomic_witness(self):
        d = MixtureDistribution.discrete([(0, F(1, 2)), (2, F(1, 2))])
        dec = convex_order_vs_uniform(d, 2)
        assert dec.verdict is Verdict.NON_MEMBER and dec.rule is Rule.CX_VIOLATION
        assert cx_gap(d, 2, 1) == F(1, 2) - F(1, 4)
        assert cx_gap(d, 2, dec.certificate["k"]) == dec.certificate["gap"] > 0

    def test_tangency(self):
        # E[U | U < p] and E[U | U >= p]: the stop-loss curves touch at k = p
        for p in (F(1, 3), F(1, 2), F(3, 4)):
            d = MixtureDistribution.discrete([(p / 2, p), ((1 + p) / 2, 1 - p)])
            dec = convex_order_vs_uniform(d, 1)
            assert dec.is_member
            assert cx_gap(d, 1, p) == 0

    def test_mean_and_support(self):
        assert convex_order_vs_uniform(MixtureDistribution.point_mass(1), 3).rule is Rule.SUPPORT_OR_MEAN_VIOLATION
        wide = MixtureDistribution.discrete([(-1, F(1, 2)), (4, F(1, 2))])
        assert convex_order_vs_uniform(wide, 3).certificate["kind"] == "support"

    def test_max_gap_agrees_with_float_grid(self):
        rng = random.Random(17)
        for _ in range(100):
            n = rng.randint(2, 4)
            d = random_mixture(rng, n)
            _, exact = max_cx_gap(d, n)
            approx = float_gap_grid(d, n)
            # the float grid can only underestimate the exact supremum
            assert approx <= float(exact) + 1e-12
            assert float(exact) - approx < 1e-3
            assert convex_order_vs_uniform(d, n).is_member == (exact <= 0)
