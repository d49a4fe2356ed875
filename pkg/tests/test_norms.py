"""Measurement layer: ell_q targets, L_p norms, Rademacher averages, pairing."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from walshcube.hypercube import HypercubeFunction
from walshcube.norms import (
    FunctionFamily,
    NormSpace,
    RademacherAveragePlan,
    duality_pairing,
    lp_norm,
    rademacher_average,
    sample_sign_masks,
)

from _naive import lp_norm_sum, rademacher_average_enumerated


def random_function(n, m, seed=0):
    rng = np.random.default_rng(seed)
    return HypercubeFunction.from_values(rng.standard_normal((1 << n, m)))


def random_family(n, m, seed=0):
    rng = np.random.default_rng(seed)
    return FunctionFamily(
        tuple(
            HypercubeFunction.from_values(rng.standard_normal((1 << n, m)))
            for _ in range(n)
        )
    )


class TestNormSpace:
    def test_dual_indices(self):
        assert NormSpace(3, 1.0).dual_index == math.inf
        assert NormSpace(3, math.inf).dual_index == 1.0
        assert NormSpace(3, 2.0).dual_index == 2.0
        assert NormSpace(3, 1.5).dual_index == pytest.approx(3.0)

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            NormSpace(2, 0.5)

    @pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 4.0, math.inf])
    def test_norm_axioms_on_samples(self, q):
        rng = np.random.default_rng(17)
        space = NormSpace(4, q)
        for _ in range(50):
            u = rng.standard_normal(4)
            v = rng.standard_normal(4)
            lam = rng.standard_normal()
            assert space.norm(u) >= 0
            assert space.norm(lam * u) == pytest.approx(abs(lam) * space.norm(u))
            assert space.norm(u + v) <= space.norm(u) + space.norm(v) + 1e-12
        assert space.norm(np.zeros(4)) == 0.0

    def test_definite(self):
        space = NormSpace(3, 1.5)
        assert space.norm(np.array([0.0, 1e-8, 0.0])) > 0
        assert space.norm(np.zeros(3)) == 0.0


class TestLpNorm:
    def test_constant_function(self):
        c = np.array([3.0, -4.0])
        f = HypercubeFunction.constant(4, c)
        for p in (1.0, 2.0, 3.5, math.inf):
            assert lp_norm(f, p, NormSpace(2, 2.0)) == pytest.approx(5.0)

    def test_single_character_scaling(self):
        v = np.array([1.0, -2.0])
        f = HypercubeFunction.character(5, 0b1, v)
        for p in (1.0, 2.5, math.inf):
            for q in (1.0, 2.0, math.inf):
                assert lp_norm(f, p, NormSpace(2, q)) == pytest.approx(
                    NormSpace(2, q).norm(v)
                )

    def test_hand_case(self):
        f = HypercubeFunction.from_values(np.array([1.0, 2.0, 3.0, 4.0]))
        assert lp_norm(f, 2.0, NormSpace(1, 2.0)) == pytest.approx(math.sqrt(30.0 / 4.0))

    def test_matches_defining_sum(self):
        f = random_function(5, 3, seed=5)
        for p in (1.0, 2.0, 3.0, math.inf):
            for q in (1.0, 1.5, 2.0, math.inf):
                assert lp_norm(f, p, NormSpace(3, q)) == pytest.approx(
                    lp_norm_sum(f.values, p, q), rel=1e-12
                )

    def test_monotone_in_p(self):
        f = random_function(6, 2, seed=6)
        space = NormSpace(2, 2.0)
        values = [lp_norm(f, p, space) for p in (1.0, 1.5, 2.0, 4.0, math.inf)]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    def test_rejects_bad_exponent_and_shape(self):
        f = random_function(3, 2)
        with pytest.raises(ValueError):
            lp_norm(f, 0.5, NormSpace(2, 2.0))
        with pytest.raises(ValueError):
            lp_norm(f, 2.0, NormSpace(3, 2.0))


class TestFunctionFamily:
    def test_requires_n_members(self):
        f = random_function(3, 1)
        with pytest.raises(ValueError, match="exactly n=3"):
            FunctionFamily((f, f))

    def test_requires_matching_shapes(self):
        with pytest.raises(ValueError, match="share"):
            FunctionFamily((random_function(2, 1), random_function(2, 2)))

    def test_json_round_trip(self):
        family = random_family(3, 2, seed=8)
        back = FunctionFamily.from_json_dict(family.to_json_dict())
        for a, b in zip(family, back):
            assert_allclose(a.values, b.values)


class TestRademacherAverageExact:
    def test_single_member_family(self):
        f = random_function(1, 2, seed=9)
        family = FunctionFamily((f,))
        plan = RademacherAveragePlan(mode="exact")
        got = rademacher_average(family, 3.0, NormSpace(2, 2.0), plan)
        assert got == pytest.approx(lp_norm(f, 3.0, NormSpace(2, 2.0)))

    def test_hilbert_p2_is_square_sum(self):
        family = random_family(5, 2, seed=10)
        plan = RademacherAveragePlan(mode="exact")
        space = NormSpace(2, 2.0)
        got = rademacher_average(family, 2.0, space, plan)
        expected = math.sqrt(sum(lp_norm(f, 2.0, space) ** 2 for f in family))
        assert got == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("p,q", [(1.5, 1.0), (2.0, 2.0), (3.0, math.inf)])
    def test_matches_enumerated_oracle(self, p, q):
        family = random_family(4, 2, seed=11)
        plan = RademacherAveragePlan(mode="exact")
        got = rademacher_average(family, p, NormSpace(2, q), plan)
        expected = rademacher_average_enumerated(family.stacked(), p, q)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_invariance_under_permutation_and_single_flip(self):
        family = random_family(4, 2, seed=12)
        plan = RademacherAveragePlan(mode="exact")
        space = NormSpace(2, 1.5)
        base = rademacher_average(family, 2.5, space, plan)
        shuffled = FunctionFamily(tuple(family.functions[i] for i in (2, 0, 3, 1)))
        flipped = FunctionFamily(
            (family.functions[0], -1.0 * family.functions[1]) + family.functions[2:]
        )
        assert rademacher_average(shuffled, 2.5, space, plan) == pytest.approx(base, rel=1e-12)
        assert rademacher_average(flipped, 2.5, space, plan) == pytest.approx(base, rel=1e-12)

    def test_rejects_infinite_exponent(self):
        family = random_family(2, 1)
        with pytest.raises(ValueError):
            rademacher_average(family, math.inf, NormSpace(1, 2.0), RademacherAveragePlan())


class TestRademacherAverageMonteCarlo:
    def test_within_three_standard_errors_of_exact(self):
        family = random_family(8, 2, seed=13)
        space = NormSpace(2, 2.0)
        p = 2.0
        exact = rademacher_average(family, p, space, RademacherAveragePlan(mode="exact"))
        samples = 100_000
        mc = rademacher_average(
            family, p, space, RademacherAveragePlan(mode="monte-carlo", samples=samples, seed=3)
        )
        # Standard error of the p-th power mean, propagated through the root.
        values = []
        masks = sample_sign_masks(3, samples, 8)
        tables = family.stacked()
        for mask in masks[:2000]:
            signs = 1.0 - 2.0 * ((mask >> np.arange(8)) & 1)
            combo = np.tensordot(signs, tables, axes=(0, 0))
            values.append(np.mean(space.norms(combo) ** p))
        spread = np.std(values) / math.sqrt(samples)
        tolerance = 3.0 * spread / (p * exact ** (p - 1.0))
        assert abs(mc - exact) <= max(tolerance, 1e-12)

    def test_deterministic_given_seed(self):
        family = random_family(6, 1, seed=14)
        plan = RademacherAveragePlan(mode="monte-carlo", samples=500, seed=42)
        space = NormSpace(1, 2.0)
        first = rademacher_average(family, 2.0, space, plan)
        second = rademacher_average(family, 2.0, space, plan)
        assert first == second

    def test_counter_based_sampler_is_stateless(self):
        full = sample_sign_masks(7, 100, 6)
        tail = sample_sign_masks(7, 100, 6)[50:]
        assert np.array_equal(full[50:], tail)
        assert np.array_equal(full, sample_sign_masks(7, 100, 6))
        assert not np.array_equal(full, sample_sign_masks(8, 100, 6))
        assert full.min() >= 0 and full.max() < 64


class TestDualityPairing:
    def test_self_pairing_is_squared_l2(self):
        f = random_function(5, 3, seed=15)
        space = NormSpace(3, 2.0)
        assert duality_pairing(f, f) == pytest.approx(lp_norm(f, 2.0, space) ** 2, rel=1e-12)

    def test_constants_pair_to_dot_product(self):
        c = np.array([1.0, 2.0])
        d = np.array([-3.0, 0.5])
        f = HypercubeFunction.constant(4, c)
        g = HypercubeFunction.constant(4, d)
        assert duality_pairing(f, g) == pytest.approx(float(c @ d))

    def test_bilinear(self):
        f = random_function(4, 2, seed=16)
        g = random_function(4, 2, seed=17)
        h = random_function(4, 2, seed=18)
        lhs = duality_pairing(2.0 * f + g, h)
        rhs = 2.0 * duality_pairing(f, h) + duality_pairing(g, h)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    @pytest.mark.parametrize("p,q", [(2.0, 2.0), (3.0, 1.5)])
    def test_hoelder_bound(self, p, q):
        f = random_function(5, 2, seed=19)
        g = random_function(5, 2, seed=20)
        x = NormSpace(2, q)
        p_star = p / (p - 1.0)
        bound = lp_norm(f, p, x) * lp_norm(g, p_star, x.dual())
        assert abs(duality_pairing(f, g)) <= bound + 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            duality_pairing(random_function(3, 1), random_function(3, 2))
