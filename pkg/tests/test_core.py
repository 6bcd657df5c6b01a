import math
import random

import pytest

from edaloop.core import (
    FlowKind,
    Objective,
    ObjectiveCheck,
    PromptBundle,
    deviation_pct,
    evaluate_objective,
    register_metric,
)


def check(metric, comparator, target, metrics, **kw):
    return evaluate_objective(Objective(metric, comparator, target, **kw), metrics)


class TestEvaluateObjective:
    def test_s11_met_with_positive_margin(self):
        c = check("s11_db", "<=", -10.0, {"s11_db": -16.7}, at_frequency=2.4e9)
        assert c.status == "met"
        assert c.deviation_pct == pytest.approx(67.0, abs=1e-9)

    def test_clock_frequency_margin(self):
        c = check("clock_freq_hz", ">=", 1e9, {"clock_freq_hz": 1.11e9})
        assert c.status == "met"
        assert c.deviation_pct == pytest.approx(11.0, abs=1e-9)

    def test_s11_unmet_negative_deviation(self):
        c = check("s11_db", "<=", -10.0, {"s11_db": -2.1}, at_frequency=2.4e9)
        assert c.status == "unmet"
        assert c.deviation_pct == pytest.approx(-79.0, abs=1e-9)

    def test_exact_match_zero_deviation(self):
        c = check("dc_gain_db", ">=", 40.0, {"dc_gain_db": 40.0})
        assert c.status == "met"
        assert c.deviation_pct == 0.0

    def test_absent_metric_unmeasurable(self):
        c = check("dc_gain_db", ">=", 40.0, {"other": 1.0})
        assert c.status == "unmeasurable"
        assert c.measured is None
        assert c.deviation_pct is None

    def test_zero_target_no_deviation_but_status(self):
        c = check("lut_count", "<=", 0.0, {"lut_count": 0.0})
        assert c.status == "met"
        assert c.deviation_pct is None
        c = check("lut_count", "<=", 0.0, {"lut_count": 3.0})
        assert c.status == "unmet"
        assert c.deviation_pct is None

    def test_approx_uses_tolerance(self):
        c = check("ugb_hz", "approx", 1e6, {"ugb_hz": 1.05e6})
        assert c.status == "met"  # default tolerance 10%
        c = check("ugb_hz", "approx", 1e6, {"ugb_hz": 1.2e6})
        assert c.status == "unmet"
        c = check("ugb_hz", "approx", 1e6, {"ugb_hz": 1.2e6}, tolerance=3e5)
        assert c.status == "met"

    def test_non_finite_measured_rejected(self):
        with pytest.raises(ValueError):
            check("dc_gain_db", ">=", 40.0, {"dc_gain_db": float("nan")})

    def test_pure_function(self):
        obj = Objective("dc_gain_db", ">=", 40.0)
        metrics = {"dc_gain_db": 44.2}
        assert evaluate_objective(obj, metrics) == evaluate_objective(obj, metrics)


class TestDeviationProperties:
    def test_identity_is_zero(self):
        rng = random.Random(5)
        for _ in range(200):
            x = rng.uniform(-1e6, 1e6)
            if x == 0:
                continue
            assert deviation_pct(x, x) == pytest.approx(0.0, abs=1e-12)

    def test_scale_invariance(self):
        rng = random.Random(6)
        for _ in range(200):
            result = rng.uniform(-100, 100)
            target = rng.uniform(0.1, 100) * rng.choice((-1, 1))
            k = rng.uniform(0.01, 1000)
            base = deviation_pct(result, target)
            scaled = deviation_pct(result * k, target * k)
            assert scaled == pytest.approx(base, rel=1e-9)
            s11 = deviation_pct(result, target, "s11_db")
            s11_scaled = deviation_pct(result * k, target * k, "s11_db")
            assert s11_scaled == pytest.approx(s11, rel=1e-9)

    def test_s11_sign_follows_magnitude_difference(self):
        rng = random.Random(7)
        for _ in range(200):
            result = -rng.uniform(0.1, 40)
            target = -rng.uniform(0.1, 40)
            dev = deviation_pct(result, target, "s11_db")
            assert (dev > 0) == (abs(result) > abs(target)) or dev == 0


class TestObjectiveValidation:
    def test_bad_comparator(self):
        with pytest.raises(ValueError):
            Objective("x", ">", 1.0)

    def test_infinite_target(self):
        with pytest.raises(ValueError):
            Objective("x", ">=", math.inf)

    def test_tolerance_only_for_approx(self):
        with pytest.raises(ValueError):
            Objective("x", ">=", 1.0, tolerance=0.1)

    def test_s11_requires_frequency(self):
        with pytest.raises(ValueError):
            Objective("s11_db", "<=", -10.0)

    def test_negative_at_frequency(self):
        with pytest.raises(ValueError):
            Objective("ugb_hz", ">=", 1e6, at_frequency=-1.0)

    def test_check_consistency(self):
        obj = Objective("x", ">=", 1.0)
        with pytest.raises(ValueError):
            ObjectiveCheck(obj, None, "met", None)
        with pytest.raises(ValueError):
            ObjectiveCheck(obj, 2.0, "unmeasurable", 100.0)


class TestPromptBundle:
    def test_fpga_extras_allowed(self):
        PromptBundle(FlowKind.FPGA, "sys", "user", (), testbench="tb", clock_constraint="clk 1ns")

    def test_non_fpga_extras_rejected(self):
        with pytest.raises(ValueError):
            PromptBundle(FlowKind.RF, "sys", "user", (), testbench="tb")

    def test_empty_prompt_rejected(self):
        with pytest.raises(ValueError):
            PromptBundle(FlowKind.RF, " ", "user")


def test_open_registry_extends_deviation_semantics():
    register_metric("return_loss_db", "dB", negative_is_better=True)
    assert deviation_pct(-20.0, -10.0, "return_loss_db") == pytest.approx(100.0)
    assert deviation_pct(-20.0, -10.0, "unregistered_metric") == pytest.approx(100.0)
