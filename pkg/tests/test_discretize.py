import math

import numpy as np
import pytest

from fireflyopt.core import RngStream
from fireflyopt.discretize import (BinarizationRule, IntegerRounder, S_FAMILY,
                                   TRANSFER_IDS, TransferBinarizer, V_FAMILY,
                                   binarize, decode_random_key,
                                   mixed_binary_update, move_gate,
                                   round_to_integer, transfer)

GRID = np.linspace(-8.0, 8.0, 1001)
# Strictness is checked where double precision can still resolve the slope:
# erf saturates to exactly 1.0 beyond |x| ~ 5.9.
STRICT_GRID = np.linspace(-5.0, 5.0, 1001)


class TestTransfer:
    def test_s2_at_zero(self):
        assert transfer("S2", 0.0) == 0.5

    @pytest.mark.parametrize("fn", ["V1", "V2", "V3", "V4"])
    def test_v_family_vanishes_at_zero(self, fn):
        assert transfer(fn, 0.0) == 0.0

    def test_s1_at_one(self):
        assert transfer("S1", 1.0) == pytest.approx(1.0 / (1.0 + math.exp(-2.0)), abs=1e-12)

    def test_erfs_at_zero(self):
        assert transfer("ErfS", 0.0) == 0.5

    def test_v2_is_tanh(self):
        assert transfer("V2", 1.0) == pytest.approx(math.tanh(1.0), abs=1e-12)

    @pytest.mark.parametrize("fn", TRANSFER_IDS)
    def test_range_on_grid(self, fn):
        t = transfer(fn, GRID)
        assert np.all(t >= 0.0) and np.all(t <= 1.0)

    @pytest.mark.parametrize("fn", TRANSFER_IDS)
    def test_range_at_extremes(self, fn):
        t = transfer(fn, np.array([-1e300, -1e9, 1e9, 1e300]))
        assert np.all(t >= 0.0) and np.all(t <= 1.0)

    @pytest.mark.parametrize("fn", S_FAMILY)
    def test_s_family_strictly_increasing(self, fn):
        t = transfer(fn, STRICT_GRID)
        assert np.all(np.diff(t) > 0)

    @pytest.mark.parametrize("fn", S_FAMILY)
    def test_s_family_half_at_zero(self, fn):
        assert transfer(fn, 0.0) == 0.5

    @pytest.mark.parametrize("fn", V_FAMILY)
    def test_v_family_even(self, fn):
        assert np.array_equal(transfer(fn, GRID), transfer(fn, -GRID))

    @pytest.mark.parametrize("fn", V_FAMILY)
    def test_v_family_nondecreasing_in_magnitude(self, fn):
        half = GRID[GRID >= 0]
        t = transfer(fn, half)
        assert np.all(np.diff(t) >= 0)

    def test_v1_constant_switch(self):
        paper = transfer("V1", 1.0)
        conventional = transfer("V1", 1.0, v1_conventional=True)
        assert paper == pytest.approx(abs(math.erf(math.sqrt(2.0) / math.pi)), abs=1e-12)
        assert conventional == pytest.approx(abs(math.erf(math.sqrt(math.pi) / 2.0)), abs=1e-12)
        assert paper != conventional

    def test_unknown_id_rejected(self):
        with pytest.raises(ValueError):
            transfer("S9", 0.0)


class TestBinarize:
    def test_probabilistic_certain(self):
        rng = RngStream(1)
        assert all(binarize(BinarizationRule("probabilistic"), 1.0, rng) == 1
                   for _ in range(100))

    def test_probabilistic_never(self):
        rng = RngStream(2)
        assert all(binarize(BinarizationRule("probabilistic"), 0.0, rng) == 0
                   for _ in range(100))

    def test_complement_keep_branch(self, stub_rng):
        # rand >= t keeps the previous bit
        rule = BinarizationRule("complement")
        assert binarize(rule, 0.0, stub_rng([0.7]), previous=1) == 1
        assert binarize(rule, 0.0, stub_rng([0.7]), previous=0) == 0

    def test_complement_flip_branch(self, stub_rng):
        rule = BinarizationRule("complement")
        assert binarize(rule, 1.0, stub_rng([0.2]), previous=1) == 0
        assert binarize(rule, 1.0, stub_rng([0.2]), previous=0) == 1

    def test_elite_copies_best(self, stub_rng):
        rule = BinarizationRule("elite")
        assert binarize(rule, 1.0, stub_rng([0.2]), best=1) == 1
        assert binarize(rule, 1.0, stub_rng([0.2]), best=0) == 0
        assert binarize(rule, 0.0, stub_rng([0.2]), best=1) == 0  # else branch is 0

    def test_tanh_threshold_example(self):
        rule = BinarizationRule("tanh-threshold", tau=0.5)
        assert binarize(rule, 0.0, raw=1.0) == 1  # tanh(1) = 0.7616 > 0.5
        assert binarize(rule, 0.0, raw=0.1) == 0

    def test_tanh_threshold_deterministic(self):
        rule = BinarizationRule("tanh-threshold", tau=0.3)
        raws = np.linspace(-3, 3, 50)
        a = binarize(rule, np.zeros(50), raw=raws)
        b = binarize(rule, np.zeros(50), raw=raws)
        assert np.array_equal(a, b)

    def test_missing_context_rejected(self):
        rng = RngStream(3)
        with pytest.raises(ValueError):
            binarize(BinarizationRule("elite"), 0.5, rng)
        with pytest.raises(ValueError):
            binarize(BinarizationRule("complement"), 0.5, rng)
        with pytest.raises(ValueError):
            binarize(BinarizationRule("tanh-threshold"), 0.5, rng)

    def test_output_always_bits(self):
        rng = RngStream(4)
        for rule in (BinarizationRule("probabilistic"), BinarizationRule("complement"),
                     BinarizationRule("elite"), BinarizationRule("tanh-threshold", tau=0.4)):
            raw = rng.uniform(200) * 8 - 4
            t = transfer("S2", raw)
            prev = (rng.uniform(200) < 0.5).astype(np.int64)
            best = (rng.uniform(200) < 0.5).astype(np.int64)
            bits = binarize(rule, t, rng, previous=prev, best=best, raw=raw)
            assert set(np.unique(bits)) <= {0, 1}

    def test_bad_tau_rejected(self):
        with pytest.raises(ValueError):
            BinarizationRule("tanh-threshold", tau=1.5)

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError):
            BinarizationRule("majority")


class TestDecodeRandomKey:
    def test_sorted_keys_identity(self):
        assert list(decode_random_key(np.array([0.1, 0.2, 0.3]))) == [1, 2, 3]

    def test_argsort_order(self):
        assert list(decode_random_key(np.array([0.9, 0.1, 0.5]))) == [2, 3, 1]

    def test_equal_keys_stable(self):
        assert list(decode_random_key(np.full(4, 0.5))) == [1, 2, 3, 4]

    def test_always_a_permutation(self):
        rng = RngStream(5)
        for _ in range(200):
            perm = decode_random_key(rng.uniform(9))
            assert sorted(perm) == list(range(1, 10))

    def test_monotone_transform_invariant(self):
        rng = RngStream(6)
        for _ in range(100):
            keys = rng.uniform(7)
            base = decode_random_key(keys)
            assert np.array_equal(base, decode_random_key(np.exp(keys)))
            assert np.array_equal(base, decode_random_key(3.0 * keys + 2.0))


class TestRoundToInteger:
    def test_round_down(self):
        assert round_to_integer(np.array([2.4]), None, None)[0] == 2

    def test_tie_away_from_zero(self):
        assert round_to_integer(np.array([2.5]), None, None)[0] == 3
        assert round_to_integer(np.array([-2.5]), None, None)[0] == -3

    def test_clamp(self):
        assert round_to_integer(np.array([7.8]), np.array([0]), np.array([5]))[0] == 5

    def test_dtype(self):
        assert round_to_integer(np.array([1.2, 3.7]), None, None).dtype == np.int64


class TestMoveGate:
    def test_zero_distance_never_fires(self):
        rng = RngStream(7)
        assert not any(move_gate(1.0, 0.0, rng) for _ in range(200))

    def test_large_distance_always_fires(self):
        rng = RngStream(8)
        assert all(move_gate(1.0, 50.0, rng) for _ in range(200))

    def test_unit_distance_rate(self):
        rng = RngStream(9)
        hits = sum(move_gate(1.0, 1.0, rng) for _ in range(100_000))
        assert hits / 100_000 == pytest.approx(math.tanh(1.0), abs=5e-3)

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            move_gate(1.0, -1.0, RngStream(10))


class TestMixedBinaryUpdate:
    def test_equal_zero_components(self):
        # exponent is 0 regardless of the draw: sigmoid(0) - 0.06 = 0.44 -> 0
        assert mixed_binary_update(0.0, 0.0, RngStream(11)) == 0

    def test_limit_checks(self):
        # equal components make the draw irrelevant: the bit is
        # round(sigmoid(v) - 0.06), 1 for large positive v, 0 for large negative
        assert mixed_binary_update(30.0, 30.0, RngStream(12)) == 1
        assert mixed_binary_update(-30.0, -30.0, RngStream(12)) == 0

    def test_output_in_bits_for_random_inputs(self):
        rng = RngStream(13)
        xi = rng.uniform(100_000) * 20 - 10
        xj = rng.uniform(100_000) * 20 - 10
        bits = mixed_binary_update(xi, xj, rng)
        assert set(np.unique(bits)) <= {0, 1}


class TestDiscretizers:
    def test_transfer_binarizer_produces_bits(self):
        rng = RngStream(14)
        dz = TransferBinarizer("S2", BinarizationRule("probabilistic"))
        raw = rng.uniform(20) * 6 - 3
        prev = (rng.uniform(20) < 0.5).astype(np.int64)
        bits = dz.apply(raw, prev, prev, rng)
        assert set(np.unique(bits)) <= {0, 1}

    def test_transfer_binarizer_rejects_unknown(self):
        with pytest.raises(ValueError):
            TransferBinarizer("S9", BinarizationRule("probabilistic"))

    def test_integer_rounder(self):
        dz = IntegerRounder(np.array([0]), np.array([10]))
        out = dz.apply(np.array([3.6]), None, None, None)
        assert out[0] == 4 and out.dtype == np.int64
