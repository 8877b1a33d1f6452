import math
import random

import pytest

from movelit.errors import StatsInputError
from movelit.ttest import (ONE_TAILED_GREATER, ONE_TAILED_LESS, TWO_TAILED,
                           paired_t_test, reg_incomplete_beta, student_t_cdf)

scipy_stats = pytest.importorskip("scipy.stats")


class TestCdf:
    def test_symmetry(self):
        for t in (0.3, 1.7, 4.2):
            for df in (1, 5, 30):
                assert student_t_cdf(t, df) + student_t_cdf(-t, df) == \
                    pytest.approx(1.0, abs=1e-12)

    def test_zero_is_half(self):
        assert student_t_cdf(0.0, 7) == 0.5

    def test_against_scipy(self):
        rng = random.Random(0)
        for _ in range(200):
            t = rng.uniform(-8, 8)
            df = rng.randint(1, 60)
            assert student_t_cdf(t, df) == pytest.approx(
                scipy_stats.t.cdf(t, df), abs=1e-10)

    def test_beta_against_scipy(self):
        rng = random.Random(1)
        for _ in range(200):
            a = rng.uniform(0.5, 20)
            b = rng.uniform(0.5, 20)
            x = rng.random()
            assert reg_incomplete_beta(a, b, x) == pytest.approx(
                scipy_stats.beta.cdf(x, a, b), abs=1e-10)

    def test_bad_df(self):
        with pytest.raises(StatsInputError):
            student_t_cdf(1.0, 0)


class TestPairedTTest:
    def test_matches_scipy_all_tails(self):
        rng = random.Random(42)
        for _ in range(50):
            n = rng.randint(2, 50)
            pre = [rng.gauss(5, 2) for _ in range(n)]
            post = [a + rng.gauss(0.5, 1.5) for a in pre]
            ours_g = paired_t_test(pre, post, ONE_TAILED_GREATER)
            ours_l = paired_t_test(pre, post, ONE_TAILED_LESS)
            ours_2 = paired_t_test(pre, post, TWO_TAILED)
            ref_g = scipy_stats.ttest_rel(post, pre, alternative="greater")
            ref_l = scipy_stats.ttest_rel(post, pre, alternative="less")
            ref_2 = scipy_stats.ttest_rel(post, pre)
            for ours, ref in ((ours_g, ref_g), (ours_l, ref_l), (ours_2, ref_2)):
                assert abs(ours.t - ref.statistic) <= 1e-9
                assert abs(ours.p - ref.pvalue) <= 1e-6
                assert ours.df == n - 1

    def test_tail_complement(self):
        pre = [1.0, 2.0, 3.0, 4.0]
        post = [1.5, 2.1, 3.4, 4.2]
        g = paired_t_test(pre, post, ONE_TAILED_GREATER)
        l = paired_t_test(pre, post, ONE_TAILED_LESS)
        assert g.p + l.p == pytest.approx(1.0, abs=1e-12)

    def test_sign_follows_mean_difference(self):
        pre = [1.0, 2.0, 3.0]
        up = paired_t_test(pre, [2.0, 2.5, 4.0])
        down = paired_t_test(pre, [0.5, 1.9, 2.0])
        assert up.t > 0 and down.t < 0

    def test_shift_invariance(self):
        pre = [1.0, 2.0, 3.0, 5.0]
        post = [1.4, 2.9, 3.1, 6.0]
        a = paired_t_test(pre, post)
        b = paired_t_test([x + 100 for x in pre], [x + 100 for x in post])
        assert a.t == pytest.approx(b.t, abs=1e-12)

    def test_scale_invariance_of_t(self):
        pre = [1.0, 2.0, 3.0, 5.0]
        post = [1.4, 2.9, 3.1, 6.0]
        a = paired_t_test(pre, post)
        b = paired_t_test([3 * x for x in pre], [3 * x for x in post])
        assert a.t == pytest.approx(b.t, abs=1e-12)

    def test_degenerate_zero_variance(self):
        same = paired_t_test([1, 2, 3], [1, 2, 3])
        assert same.t == 0.0 and same.p == 0.5 and not same.degenerate
        same2 = paired_t_test([1, 2, 3], [1, 2, 3], TWO_TAILED)
        assert same2.p == 1.0
        shifted = paired_t_test([1, 2, 3], [2, 3, 4])
        assert math.isinf(shifted.t) and shifted.t > 0
        assert shifted.p == 0.0 and shifted.degenerate

    def test_input_errors(self):
        with pytest.raises(StatsInputError):
            paired_t_test([1, 2], [1])
        with pytest.raises(StatsInputError):
            paired_t_test([1], [1])
        with pytest.raises(StatsInputError):
            paired_t_test([1, 2], [1, 2], "sideways")
