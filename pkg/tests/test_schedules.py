import numpy as np
import pytest

from fireflyopt.core import RngStream
from fireflyopt.schedules import (PER_ITER_TOTAL_FACTOR, RandomDirection,
                                  alpha_at, constant_alpha, constant_gamma,
                                  emit_curve, exp_ramp, floor_dim, gamma_at,
                                  geometric, linear, per_iter_factor,
                                  random_direction, sigmoid_decay)


class TestAlphaAt:
    def test_geometric_start(self):
        assert alpha_at(geometric(2.5, 0.95), 0, 100) == 2.5

    def test_linear_endpoint(self):
        assert alpha_at(linear(2.5, 0.1), 100, 100) == pytest.approx(0.1, abs=1e-12)

    def test_sigmoid_decay_midpoint(self):
        assert alpha_at(sigmoid_decay(2.5), 50, 100) == pytest.approx(2.0, abs=1e-12)

    def test_floor_dim_endpoints(self):
        schedule = floor_dim(5)
        assert alpha_at(schedule, 0, 100) == 5.0
        assert alpha_at(schedule, 100, 100) == 0.0

    def test_per_iter_factor_carried(self):
        schedule = per_iter_factor(2.5)
        carried = 2.5
        for itr in range(100):
            carried = alpha_at(schedule, itr, 100, carried=carried)
        assert carried == pytest.approx(2.5 * PER_ITER_TOTAL_FACTOR, rel=1e-9)

    def test_out_of_range_itr_rejected(self):
        with pytest.raises(ValueError):
            alpha_at(geometric(2.5, 0.95), 101, 100)

    @pytest.mark.parametrize("schedule", [
        constant_alpha(1.0),
        geometric(2.5, 0.95),
        per_iter_factor(2.5),
        sigmoid_decay(2.5),
        linear(2.5, 0.1),
        floor_dim(5),
    ])
    def test_non_increasing_and_non_negative(self, schedule):
        values = [v for _, v in emit_curve(schedule, 200)]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert all(v >= 0.0 for v in values)


class TestScheduleValidation:
    def test_theta_range(self):
        with pytest.raises(ValueError):
            geometric(2.5, 1.0)
        with pytest.raises(ValueError):
            geometric(2.5, 0.0)

    def test_linear_order(self):
        with pytest.raises(ValueError):
            linear(0.1, 2.5)

    def test_sigmoid_floor(self):
        with pytest.raises(ValueError):
            sigmoid_decay(0.5)

    def test_floor_dim_dimension(self):
        with pytest.raises(ValueError):
            floor_dim(0)


class TestGammaAt:
    def test_start_exact(self):
        assert gamma_at(exp_ramp(1.0, 0.01), 0, 100) == 1.0

    def test_end_exact(self):
        assert gamma_at(exp_ramp(1.0, 0.01), 100, 100) == 0.01

    def test_geometric_midpoint(self):
        assert gamma_at(exp_ramp(1.0, 0.01), 50, 100) == pytest.approx(0.1, rel=1e-12)

    def test_constant(self):
        assert gamma_at(constant_gamma(0.7), 31, 100) == 0.7

    def test_positive_bounds_required(self):
        with pytest.raises(ValueError):
            exp_ramp(1.0, 0.0)


class TestRandomDirection:
    def test_uniform_range(self):
        rng = RngStream(1)
        for _ in range(100):
            d = random_direction(RandomDirection(), 8, rng)
            assert np.all(d >= -0.5) and np.all(d < 0.5)

    def test_levy_heavy_tail(self):
        rng = RngStream(2)
        draws = np.concatenate([random_direction(RandomDirection("levy"), 1000, rng)
                                for _ in range(100)])
        m2 = float(np.mean(draws ** 2))
        m4 = float(np.mean(draws ** 4))
        assert m4 / m2 ** 2 > 3.0  # sample kurtosis far beyond Gaussian

    def test_unit_range_scaling_is_identity(self):
        rng = RngStream(3)
        scaled = RandomDirection(range_scale=True)
        plain = RandomDirection()
        a = random_direction(scaled, 5, RngStream(4), np.zeros(5), np.ones(5))
        b = random_direction(plain, 5, RngStream(4))
        assert np.allclose(a, b)

    def test_range_scale_needs_bounds(self):
        with pytest.raises(ValueError):
            random_direction(RandomDirection(range_scale=True), 3, RngStream(5))

    def test_bad_exponent_rejected(self):
        with pytest.raises(ValueError):
            RandomDirection("levy", exponent=2.5)


class TestEmitCurve:
    def test_geometric_strictly_decreasing(self):
        values = [v for _, v in emit_curve(geometric(2.5, 0.95), 100)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_floor_dim_staircase(self):
        values = [v for _, v in emit_curve(floor_dim(5), 100)]
        assert values[0] == 5.0 and values[-1] == 0.0
        assert all(v == int(v) for v in values)
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_per_iter_factor_compounds(self):
        values = [v for _, v in emit_curve(per_iter_factor(2.5), 100)]
        assert values[0] == 2.5
        assert values[-1] == pytest.approx(2.5 * PER_ITER_TOTAL_FACTOR, rel=1e-9)

    def test_gamma_curve(self):
        values = [v for _, v in emit_curve(exp_ramp(1.0, 0.01), 50)]
        assert values[0] == 1.0 and values[-1] == 0.01
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_covers_every_iteration(self):
        series = emit_curve(constant_alpha(1.0), 17)
        assert [itr for itr, _ in series] == list(range(18))
