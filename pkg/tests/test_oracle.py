import random
from fractions import Fraction as F

import pytest
from scipy.integrate import quad

from _support import biatomic, random_grid_law, triatomic

from uniform_sums.distributions import MixtureDistribution
from uniform_sums.oracle import (
    GridJoint,
    GridSpec,
    GridTarget,
    cells_in_interval,
    discretize,
    feasible,
    grid_compatible,
    grid_extreme,
    grid_extreme_prob,
    refine_target,
    target_from_atoms,
    verify_certificate,
    verify_witness,
)


class TestGridSpec:
    def test_midpoint_values(self):
        spec = GridSpec(2, 2)
        assert [spec.value(s) for s in range(3)] == [F(1, 2), F(1), F(3, 2)]
        assert spec.index_of(1) == 1 and spec.index_of(F(3, 4)) is None

    def test_limits(self):
        with pytest.raises(ValueError):
            GridSpec(1, 2)
        with pytest.raises(ValueError):
            GridSpec(4, 4)
        with pytest.raises(ValueError):
            GridSpec(25, 3)
        assert GridSpec(25, 3, allow_large=True).max_index == 72

    def test_target_invariants(self):
        with pytest.raises(ValueError):
            GridTarget((F(1, 2), F(1, 3)))
        with pytest.raises(ValueError):
            GridTarget((F(3, 2), F(-1, 2)))


class TestDiscretize:
    def test_exact_hits(self):
        assert discretize(MixtureDistribution.point_mass(1), 2, 2).masses == (0, 1, 0)
        d = MixtureDistribution.discrete([(F(1, 2), F(1, 2)), (F(3, 2), F(1, 2))])
        assert discretize(d, 2, 2).masses == (F(1, 2), 0, F(1, 2))

    def test_uniform_mean_preserving_binning(self):
        t = discretize(MixtureDistribution.uniform(0, 2), 2, 2)
        assert t.masses == (F(3, 8), F(1, 4), F(3, 8))
        # direct integration of the hat weights against the density 1/2
        left = 0.25 + quad(lambda x: 0.5 * (1 - (2 * x - 1)), 0.5, 1.0)[0]
        assert abs(left - 0.375) < 1e-12
        assert t.mean_index() == 1

    @pytest.mark.parametrize("m", [3, 5, 8])
    def test_mean_kept_inside_hull(self, m):
        d = MixtureDistribution.step_density([(F(1, 2), 1, F(1, 3)), (1, F(3, 2), F(2, 3))])
        d = d.scale_shift(1, 1 - d.mean())
        spec = GridSpec(m, 2)
        assert spec.value(0) <= d.support_bounds()[0]
        t = discretize(d, 2, m)
        assert sum(spec.value(s) * v for s, v in enumerate(t.masses)) == d.mean()

    def test_mass_outside_hull_goes_to_end_cell(self):
        # density 2/3; mass 1/6 lies below the first grid value 1/2 and the
        # hat weight 2 - 2x on [1/2, 1] contributes (2/3) * (1/4)
        d = MixtureDistribution.uniform(F(1, 4), F(7, 4))
        assert discretize(d, 2, 2).masses == (F(1, 3), F(1, 3), F(1, 3))

    def test_support_violation(self):
        with pytest.raises(ValueError):
            discretize(MixtureDistribution.uniform(0, 3), 2, 4)

    def test_off_grid_atoms_rejected_by_exact_targets(self):
        with pytest.raises(ValueError):
            target_from_atoms(MixtureDistribution.point_mass(F(3, 4)), GridSpec(2, 2))
        assert not grid_compatible(MixtureDistribution.point_mass(F(3, 4)), GridSpec(2, 2))


class TestFeasible:
    def test_antithetic(self):
        spec = GridSpec(2, 2)
        r = feasible(GridTarget((0, 1, 0)), spec)
        assert r.feasible
        assert r.witness.to_nested() == [[0, F(1, 2)], [F(1, 2), 0]]

    def test_comonotonic(self):
        spec = GridSpec(2, 2)
        r = feasible(GridTarget((F(1, 2), 0, F(1, 2))), spec)
        assert r.witness.to_nested() == [[F(1, 2), 0], [0, F(1, 2)]]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            feasible(GridTarget((0, 1, 0)), GridSpec(3, 2))

    def test_wrong_mean_is_infeasible_with_certificate(self):
        spec = GridSpec(3, 2)
        t = GridTarget((1, 0, 0, 0, 0))
        r = feasible(t, spec)
        assert not r.feasible and verify_certificate(r.certificate, t, spec)

    def test_triatomic_below_threshold(self):
        spec = GridSpec(60, 2)
        dist = triatomic(F(1), F(1, 3), F(3, 10))
        assert dist.masses == (F(7, 20), F(3, 10), F(7, 20))
        t = target_from_atoms(dist, spec)
        r = feasible(t, spec)
        assert not r.feasible
        assert verify_certificate(r.certificate, t, spec)

    def test_tampered_witness_fails_verification(self):
        spec = GridSpec(2, 2)
        t = GridTarget((0, 1, 0))
        joint = GridJoint(spec, {(0, 1): F(1, 2), (1, 0): F(1, 2)})
        assert verify_witness(joint, t)
        assert not verify_witness(GridJoint(spec, {(0, 0): F(1, 2), (1, 1): F(1, 2)}), t)

    def test_random_n3_members_have_witnesses(self):
        rng = random.Random(1)
        spec = GridSpec(4, 3)
        seen = 0
        while seen < 8:
            d = random_grid_law(rng, spec)
            if d is None:
                continue
            seen += 1
            t = target_from_atoms(d, spec)
            r = feasible(t, spec)
            if r.feasible:
                assert verify_witness(r.witness, t)
            else:
                assert verify_certificate(r.certificate, t, spec)

    def test_refinement_keeps_feasible_targets_feasible(self):
        spec = GridSpec(2, 2)
        t = target_from_atoms(biatomic(F(1, 2), F(1)), spec)
        fine_t, fine = refine_target(t, spec)
        assert fine.m == 4
        assert feasible(t, spec).feasible and feasible(fine_t, fine).feasible
        with pytest.raises(ValueError):
            refine_target(GridTarget((1,)), GridSpec(2, 3))


class TestExtremes:
    def test_full_range(self):
        spec = GridSpec(3, 2)
        for sense in ("min", "max"):
            assert grid_extreme_prob(spec, 0, spec.max_index, sense) == 1

    def test_antithetic_maximum(self):
        assert grid_extreme_prob(GridSpec(2, 2), 1, 1, "max") == 1

    def test_empty_or_bad_range(self):
        with pytest.raises(ValueError):
            grid_extreme_prob(GridSpec(2, 2), 2, 1, "min")
        with pytest.raises(ValueError):
            grid_extreme_prob(GridSpec(2, 2), 0, 1, "sideways")
        assert cells_in_interval(GridSpec(2, 2), F(1, 10), F(1, 5), closed=True) is None

    @pytest.mark.parametrize("m", [4, 6])
    def test_min_not_above_max_and_joint_attains(self, m):
        spec = GridSpec(m, 3)
        lo, hi = cells_in_interval(spec, 1, 2, closed=True)
        mn = grid_extreme(spec, lo, hi, "min")
        mx = grid_extreme(spec, lo, hi, "max")
        assert mn.value <= mx.value
        for res in (mn, mx):
            attained = sum(v for cell, v in res.joint.entries.items() if lo <= sum(cell) <= hi)
            assert attained == res.value

    def test_central_interval_approaches_closed_form(self):
        # P(1 <= S <= 2) for n = 3: the continuous maximum is 1
        spec = GridSpec(10, 3)
        lo, hi = cells_in_interval(spec, 1, 2, closed=True)
        assert grid_extreme_prob(spec, lo, hi, "max") == 1
