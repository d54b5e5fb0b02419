"""Tests for the PR-box and the one-bit classical random access code."""
from __future__ import annotations

from itertools import product

import pytest

from qracbox.boxes import (
    PRBox,
    enumerate_pr_outputs,
    rac_all_cases,
    rac_round,
    tv_distance,
    verify_rac_privacy,
)
from qracbox.metering import ProtocolError
from qracbox.rng import make_rng


class TestPRBox:
    def test_correlation_law_exhaustive(self):
        # A XOR B = x*y for every input pair and every hidden coin
        for x, y in product((0, 1), repeat=2):
            for prob, a, b in enumerate_pr_outputs(x, y):
                assert prob == 0.5
                assert a ^ b == x * y

    def test_correlation_law_sampled(self):
        rng = make_rng(11)
        for _ in range(2000):
            x, y = int(rng.integers(2)), int(rng.integers(2))
            box = PRBox(rng)
            a = box.alice(x)
            b = box.bob(y)
            assert a ^ b == x * y

    def test_zero_product_means_equal_outputs(self):
        rng = make_rng(5)
        for x, y in ((0, 0), (0, 1), (1, 0)):
            for _ in range(200):
                box = PRBox(rng)
                assert box.alice(x) == box.bob(y)

    def test_marginals_exactly_uniform_under_enumeration(self):
        for x, y in product((0, 1), repeat=2):
            outs = enumerate_pr_outputs(x, y)
            p_a0 = sum(p for p, a, _ in outs if a == 0)
            p_b0 = sum(p for p, _, b in outs if b == 0)
            assert p_a0 == 0.5
            assert p_b0 == 0.5

    def test_marginals_uniform_sampled(self):
        trials = 10**5
        for x in (0, 1):
            rng = make_rng(42, x)
            zeros = 0
            for _ in range(trials):
                box = PRBox(rng)
                zeros += box.alice(x) == 0
                box.bob(int(rng.integers(2)))
            assert abs(zeros / trials - 0.5) < 0.01

    def test_double_use_rejected(self):
        box = PRBox(make_rng(0))
        box.alice(1)
        with pytest.raises(ProtocolError):
            box.alice(0)
        box.bob(1)
        with pytest.raises(ProtocolError):
            box.bob(0)

    def test_bob_before_alice_rejected(self):
        box = PRBox(make_rng(0))
        with pytest.raises(ProtocolError):
            box.bob(0)

    def test_fixed_seed_is_deterministic(self):
        outputs = {PRBox(make_rng(123)).alice(1) for _ in range(5)}
        assert len(outputs) == 1

    def test_non_bit_inputs_rejected(self):
        box = PRBox(make_rng(0))
        with pytest.raises(ValueError):
            box.alice(2)
        with pytest.raises(ValueError):
            PRBox(coin=3)


class TestRacRound:
    def test_first_bit_retrieved(self):
        for seed in range(20):
            assert rac_round(1, 0, 0, make_rng(seed)).output == 1

    def test_second_bit_retrieved(self):
        for seed in range(20):
            assert rac_round(0, 1, 1, make_rng(seed)).output == 1

    def test_exhaustive_sixteen_cases(self):
        rounds = rac_all_cases()
        assert len(rounds) == 16
        for r in rounds:
            expected = r.a0 if r.w == 0 else r.a1
            assert r.output == expected

    def test_invalid_bits_rejected(self):
        with pytest.raises(ValueError):
            rac_round(2, 0, 0, make_rng(0))


class TestRacPrivacy:
    def test_exact_independence_under_enumeration(self):
        report = verify_rac_privacy(trials=1000, seed=3)
        assert report["metrics"]["exact_bob_tv"] == 0.0
        assert report["metrics"]["exact_alice_tv"] == 0.0

    def test_sampled_tv_bounds(self):
        report = verify_rac_privacy(trials=10**5, seed=9)
        assert report["metrics"]["sampled_bob_tv"] <= 0.02
        assert report["metrics"]["sampled_alice_tv"] <= 0.02
        assert all(c["pass"] for c in report["checks"])

    def test_too_few_trials_rejected(self):
        with pytest.raises(ValueError):
            verify_rac_privacy(trials=10, seed=0)


class TestTvDistance:
    def test_disjoint_distributions(self):
        assert tv_distance([1, 0], [0, 1]) == 1.0

    def test_identical_distributions(self):
        assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0.0
