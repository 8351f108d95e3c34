import math
from fractions import Fraction

import numpy as np
import pytest

from lhsdisc.probtools import (
    ConditionalBernoulliTree,
    DepthExceeded,
    DiscreteDistribution,
    DomainError,
    HypothesisNotMet,
    InvariantViolated,
    binom_cdf,
    binom_distribution,
    binom_pmf,
    check_lemma4,
    check_lemma6,
    check_theorem3,
    check_theorem5_binomial,
    hoeffding_bound,
    hypergeom_cdf,
    hypergeom_distribution,
    hypergeom_pmf,
    log_choose,
    tree_sum_distribution,
    tv_distance,
)

from oracles import (
    binom_cdf_frac,
    binom_pmf_frac,
    hypergeom_pmf_frac,
    tv_by_subset_enumeration,
    tv_frac,
)


class TestLogChoose:
    def test_trivial_values(self):
        assert log_choose(5, 0) == 0.0
        assert log_choose(5, 2) == pytest.approx(math.log(10), rel=1e-15)

    def test_against_big_integer_oracle(self):
        # (10**6, 17) stresses the cancellation regime, (10**6, 20000) the
        # log-gamma branch.
        for n, k in [(1000, 500), (1000, 3), (10**6, 17), (10**6, 9999), (10**6, 20000)]:
            exact = math.log(math.comb(n, k))
            assert log_choose(n, k) == pytest.approx(exact, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_choose(3, 4)
        with pytest.raises(DomainError):
            log_choose(3, -1)


class TestBinomial:
    def test_pmf_trivial(self):
        assert binom_pmf(1, 0.5, 0) == 0.5
        assert binom_pmf(4, 0.0, 0) == 1.0
        assert binom_pmf(4, 1.0, 4) == 1.0
        assert binom_pmf(4, 0.3, 5) == 0.0
        assert binom_pmf(4, 0.3, -1) == 0.0

    def test_cdf_edges(self):
        assert binom_cdf(10, 0.3, 10) == 1.0
        assert binom_cdf(10, 0.3, -1) == 0.0

    def test_pmf_matches_rational_oracle(self):
        for n in (1, 7, 16, 60):
            for p_float in (0.25, 0.5, 3 / 5, 1 / 80):
                p = Fraction(p_float)  # exact rational value of the double
                for k in range(n + 1):
                    exact = float(binom_pmf_frac(n, p, k))
                    got = binom_pmf(n, p_float, k)
                    assert got == pytest.approx(exact, rel=1e-13, abs=1e-300)

    def test_cdf_matches_rational_oracle_both_tails(self):
        p = Fraction(1, 4)
        for n in (16, 60):
            for k in range(n + 1):
                exact = float(binom_cdf_frac(n, p, k))
                assert binom_cdf(n, 0.25, k) == pytest.approx(exact, rel=1e-12)


class TestHypergeometric:
    def test_all_white(self):
        assert hypergeom_pmf(8, 8, 3, 3) == 1.0
        assert hypergeom_pmf(8, 8, 3, 2) == 0.0

    def test_single_draw(self):
        assert hypergeom_pmf(10, 5, 1, 1) == pytest.approx(0.5, rel=1e-15)

    def test_support_limits(self):
        # 8 draws from 10 with 4 white: only 6 black exist, so at least
        # 2 white are forced into the sample.
        assert hypergeom_pmf(10, 4, 8, 1) == 0.0
        assert hypergeom_cdf(10, 4, 8, 1) == 0.0
        assert hypergeom_cdf(10, 4, 8, 4) == 1.0

    def test_pmf_matches_rational_oracle(self):
        for n_total, n_white, n_draws in [(10, 5, 5), (60, 20, 30), (37, 11, 25)]:
            for k in range(n_draws + 1):
                exact = float(hypergeom_pmf_frac(n_total, n_white, n_draws, k))
                got = hypergeom_pmf(n_total, n_white, n_draws, k)
                assert got == pytest.approx(exact, rel=1e-13, abs=1e-300)

    def test_domain(self):
        with pytest.raises(DomainError):
            hypergeom_pmf(5, 6, 2, 1)


class TestDistributionsAndTV:
    def test_distribution_mass_validated(self):
        with pytest.raises(ValueError):
            DiscreteDistribution(0, np.array([0.5, 0.4]))
        d = DiscreteDistribution(2, np.array([0.25, 0.75]))
        assert d.pmf(2) == 0.25 and d.pmf(1) == 0.0
        assert d.cdf(1) == 0.0 and d.cdf(3) == 1.0

    def test_constructed_distributions_normalized(self):
        for n_total, n_white, n_draws in [(60, 20, 30), (3200, 800, 20)]:
            h = hypergeom_distribution(n_total, n_white, n_draws)
            assert abs(float(h.probs.sum()) - 1.0) <= 1e-12
        b = binom_distribution(200, 0.0125)
        assert abs(float(b.probs.sum()) - 1.0) <= 1e-12

    def test_tv_trivial(self):
        d = binom_distribution(5, 0.3)
        assert tv_distance(d, d) == 0.0
        a = DiscreteDistribution(0, np.array([1.0]))
        b = DiscreteDistribution(1, np.array([1.0]))
        assert tv_distance(a, b) == 1.0

    def test_tv_matches_subset_enumeration(self):
        h = hypergeom_distribution(10, 5, 5)
        b = binom_distribution(5, 0.5)
        direct = tv_by_subset_enumeration(list(h.probs), list(b.probs))
        assert tv_distance(h, b) == pytest.approx(direct, abs=1e-14)

    def test_tv_single_draw_is_zero(self):
        # Mathematically zero; the two pmfs travel different log-space
        # expressions, so allow last-bit noise.
        for n_total in range(2, 101):
            for n_white in (1, n_total // 2, n_total - 1):
                if 0 < n_white < n_total:
                    h = hypergeom_distribution(n_total, n_white, 1)
                    b = binom_distribution(1, n_white / n_total)
                    assert tv_distance(h, b) <= 1e-15


class TestTheorem3:
    def test_single_draw_hypothesis_not_met(self):
        with pytest.raises(HypothesisNotMet):
            check_theorem3(10, 5, 1)

    def test_reference_instance(self):
        report = check_theorem3(10, 5, 5)
        assert report.passed
        delta = report.computed["delta"]
        assert 4 / (28 * 9) - 1e-12 <= delta <= 4 / 9 + 1e-12
        exact = float(tv_frac(10, 5, 5))
        assert delta == pytest.approx(exact, rel=1e-12)

    def test_degenerate_p(self):
        with pytest.raises(HypothesisNotMet):
            check_theorem3(10, 0, 5)
        with pytest.raises(HypothesisNotMet):
            check_theorem3(10, 10, 5)

    def test_small_sweep_against_exact_rational_tv(self):
        for n_total in (8, 12):
            for n_white in range(1, n_total):
                for n_draws in range(1, n_total + 1):
                    p = n_white / n_total
                    if n_draws * p * (1 - p) < 1.0:
                        continue
                    report = check_theorem3(n_total, n_white, n_draws)
                    assert report.passed, (n_total, n_white, n_draws)
                    exact = float(tv_frac(n_total, n_white, n_draws))
                    assert report.computed["delta"] == pytest.approx(exact, rel=1e-12)


class TestLemma4:
    def test_quarter_case(self):
        report = check_lemma4(16, 0.25)
        # Cutoff 4 - 1 = 3 exactly; mass must match the rational oracle.
        assert report.computed["cutoff"] == 3.0
        exact = float(binom_cdf_frac(16, Fraction(1, 4), 3))
        assert report.computed["mass"] == pytest.approx(exact, rel=1e-12)
        assert report.passed

    def test_one_over_n_case(self):
        report = check_lemma4(16, 1 / 16)
        # Cutoff 0.5 keeps only k = 0, mass (15/16)^16.
        assert report.computed["mass"] == pytest.approx((15 / 16) ** 16, rel=1e-12)
        assert report.passed

    def test_hypothesis_gate(self):
        with pytest.raises(HypothesisNotMet):
            check_lemma4(15, 0.25)
        with pytest.raises(HypothesisNotMet):
            check_lemma4(16, 0.3)
        with pytest.raises(HypothesisNotMet):
            check_lemma4(16, 1 / 32)


class TestTheorem5:
    def test_reference_instance(self):
        report = check_theorem5_binomial(50, 0.5, 0.2)
        assert report.passed
        assert report.bounds["hoeffding"] == pytest.approx(math.exp(-4.0), rel=1e-15)
        assert report.computed["tail"] <= math.exp(-4.0)
        # Exact rational tail: sum < 25 - 10 = 15, i.e. cdf at 14.
        exact = float(binom_cdf_frac(50, Fraction(1, 2), 14))
        assert report.computed["tail"] == pytest.approx(exact, rel=1e-12)

    def test_zero_tail_when_t_at_least_q(self):
        report = check_theorem5_binomial(20, 0.3, 0.3)
        assert report.computed["tail"] == 0.0
        assert report.passed

    def test_hoeffding_bound_values(self):
        assert hoeffding_bound(10, 1e-12) == pytest.approx(1.0, abs=1e-9)
        # Doubling the sample squares the bound.
        assert hoeffding_bound(24, 0.2) == pytest.approx(hoeffding_bound(12, 0.2) ** 2,
                                                         rel=1e-12)
        # Tail-exponent form used by the final display, evaluated at d = 10.
        d = 10
        direct = math.exp(-2 * d * d / (800**2 * (d - 1)))
        assert hoeffding_bound(d - 1, d / (800 * (d - 1))) == pytest.approx(direct, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            check_theorem5_binomial(0, 0.5, 0.1)
        with pytest.raises(DomainError):
            check_theorem5_binomial(5, 0.5, 0.0)


class TestTree:
    def test_independent_tree_equals_binomial(self):
        q = 1 / 80
        tree = ConditionalBernoulliTree.independent(10, q)
        for j in (1, 5, 10):
            dist = tree_sum_distribution(tree, j)
            ref = binom_distribution(j, q)
            assert dist.offset == ref.offset == 0
            np.testing.assert_allclose(dist.probs, ref.probs, rtol=1e-12, atol=1e-15)

    def test_depth_one_is_bernoulli(self):
        tree = ConditionalBernoulliTree([np.array([0.3])], 0.25)
        dist = tree_sum_distribution(tree, 1)
        assert dist.probs.tolist() == pytest.approx([0.7, 0.3], rel=1e-15)

    def test_random_tree_mass_sums_to_one(self):
        tree = ConditionalBernoulliTree.random(10, 1 / 80, seed=3)
        dist = tree_sum_distribution(tree, 10)
        assert abs(float(dist.probs.sum()) - 1.0) <= 1e-12

    def test_depth_guards(self):
        tree = ConditionalBernoulliTree.independent(3, 0.5)
        with pytest.raises(DepthExceeded):
            tree_sum_distribution(tree, 4)
        with pytest.raises(DepthExceeded):
            ConditionalBernoulliTree.independent(21, 0.5)

    def test_level_shape_validated(self):
        with pytest.raises(ValueError):
            ConditionalBernoulliTree([np.array([0.5, 0.5])], 0.25)

    def test_hand_computed_dependent_tree(self):
        # eta1 ~ B(0.5); eta2 | eta1=0 ~ B(0.5), eta2 | eta1=1 ~ B(1.0).
        tree = ConditionalBernoulliTree(
            [np.array([0.5]), np.array([0.5, 1.0])], 0.5)
        dist = tree_sum_distribution(tree, 2)
        assert dist.probs.tolist() == pytest.approx([0.25, 0.25, 0.5], rel=1e-15)


class TestLemma6:
    def test_independent_tree_gives_equality(self):
        q = 1 / 80
        tree = ConditionalBernoulliTree.independent(12, q)
        report = check_lemma6(tree)
        assert report.passed
        assert abs(report.margin) <= 1e-12

    def test_uniformly_larger_nodes_dominate_strictly(self):
        tree = ConditionalBernoulliTree.independent(8, 0.3)
        tree.q_floor = 0.1  # declared floor below the actual node value
        report = check_lemma6(tree)
        assert report.passed
        assert report.margin > 1e-6

    def test_corrupted_tree_rejected_before_checking(self):
        q = 1 / 80
        tree = ConditionalBernoulliTree.random(6, q, seed=9)
        tree.levels[3] = tree.levels[3].copy()
        tree.levels[3][2] = q / 2
        with pytest.raises(InvariantViolated):
            check_lemma6(tree)

    def test_random_trees_pass(self):
        q = 1 / 80
        for seed in range(25):
            depth = 1 + seed % 12
            tree = ConditionalBernoulliTree.random(depth, q, seed=seed)
            report = check_lemma6(tree)
            assert report.passed, (seed, depth, report.margin)


def test_check_report_lines_format():
    report = check_lemma4(16, 0.25)
    lines = report.lines()
    assert lines[0] == "check = lemma4"
    assert lines[-1] == "result = PASS"
