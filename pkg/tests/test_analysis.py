import math
import random

import numpy as np
import pytest

from edaloop.analysis import (
    AggregationError,
    DelayError,
    MarginError,
    ParetoPoint,
    StatsError,
    SummaryError,
    ac_metrics,
    dominates,
    matrix_csv,
    noise_margins,
    pareto_front,
    pass_rate_matrix,
    pdp,
    s11_summary,
    series_csv,
    summary_stats,
    trace_csv,
    transient_delays,
)


def two_pole_traces(a0, p1, p2, n=401, f_lo=1.0, f_hi=1e9):
    freq = np.logspace(math.log10(f_lo), math.log10(f_hi), n)
    h = a0 / ((1 + 1j * freq / p1) * (1 + 1j * freq / p2))
    mag = 20 * np.log10(np.abs(h))
    phase = np.degrees(np.angle(h))
    return list(zip(freq, mag)), list(zip(freq, phase))


def dense_scan_pm(a0, p1, p2, n=1_000_000):
    freq = np.logspace(0, 9, n)
    mag = a0 / np.sqrt((1 + (freq / p1) ** 2) * (1 + (freq / p2) ** 2))
    idx = np.nonzero(mag <= 1.0)[0]
    if len(idx) == 0:
        return None, None
    i = idx[0]
    ugb = freq[i]
    pm = 180.0 - math.degrees(math.atan(ugb / p1)) - math.degrees(math.atan(ugb / p2))
    return ugb, pm


class TestAcMetrics:
    def test_single_pole_analytic(self):
        # A0 = 100 (40 dB), pole at 10 kHz: UGB ~ 1 MHz, PM ~ 90.6 degrees.
        freq = np.logspace(0, 9, 801)
        h = 100 / (1 + 1j * freq / 1e4)
        mag = list(zip(freq, 20 * np.log10(np.abs(h))))
        phase = list(zip(freq, np.degrees(np.angle(h))))
        m = ac_metrics(mag, phase)
        assert m.dc_gain_db == pytest.approx(40.0, abs=0.01)
        ugb_true = 1e4 * math.sqrt(100**2 - 1)
        assert m.ugb_hz == pytest.approx(ugb_true, rel=0.01)
        pm_true = 180 - math.degrees(math.atan(ugb_true / 1e4))
        assert m.pm_deg == pytest.approx(pm_true, abs=0.5)
        assert m.pm_deg == pytest.approx(90.57, abs=0.1)

    def test_two_pole_vs_dense_scan(self):
        rng = random.Random(2024)
        for _ in range(100):
            a0 = 10 ** rng.uniform(1.0, 3.0)
            p1 = 10 ** rng.uniform(2.0, 5.0)
            p2 = 10 ** rng.uniform(6.5, 8.5)
            mag, phase = two_pole_traces(a0, p1, p2)
            m = ac_metrics(mag, phase)
            ugb_ref, pm_ref = dense_scan_pm(a0, p1, p2)
            assert m.ugb_hz is not None
            assert m.pm_deg == pytest.approx(pm_ref, abs=0.5)

    def test_all_below_zero_db(self):
        freq = np.logspace(0, 9, 101)
        mag = [(f, -3.0 - i * 0.01) for i, f in enumerate(freq)]
        phase = [(f, -45.0) for f in freq]
        m = ac_metrics(mag, phase)
        assert m.ugb_hz is None and m.pm_deg is None
        assert m.dc_gain_db == pytest.approx(-3.0)

    def test_multiple_crossings_flagged_first_used(self):
        freq = np.logspace(0, 6, 60)
        mag_values = np.linspace(10, -10, 60)
        mag_values[40:45] += 25  # resonant peaking recrosses 0 dB
        mag = list(zip(freq, mag_values))
        phase = [(f, -90.0) for f in freq]
        m = ac_metrics(mag, phase)
        assert m.multiple_crossings
        first_cross = next(f for f, v in zip(freq[1:], mag_values[1:]) if v <= 0)
        assert m.ugb_hz <= first_cross * 1.15

    def test_grid_refinement_stability(self):
        coarse_mag, coarse_ph = two_pole_traces(300, 1e4, 5e7, n=201)
        fine_mag, fine_ph = two_pole_traces(300, 1e4, 5e7, n=401)
        coarse = ac_metrics(coarse_mag, coarse_ph)
        fine = ac_metrics(fine_mag, fine_ph)
        assert abs(fine.ugb_hz - coarse.ugb_hz) / fine.ugb_hz < 0.005

    def test_requires_shared_grid(self):
        mag, phase = two_pole_traces(100, 1e4, 5e7)
        with pytest.raises(ValueError):
            ac_metrics(mag, phase[:-1])


class TestTransientDelays:
    @staticmethod
    def ramp_traces():
        # Input rises through 2.5 V at t=10n; output falls through 2.5 V at t=11n.
        t = np.linspace(0, 40e-9, 401)
        v_in = np.clip((t - 9.5e-9) / 1e-9, 0, 1) * 5.0
        v_out = 5.0 - np.clip((t - 10.5e-9) / 1e-9, 0, 1) * 5.0
        return list(zip(t, v_in)), list(zip(t, v_out))

    def test_constructed_ramp_delay(self):
        v_in, v_out = self.ramp_traces()
        delays = transient_delays(v_in, v_out, vdd=5.0)
        assert delays["tphl"] == pytest.approx(1e-9, rel=1e-6)

    def test_symmetric_edges_equal_worst(self):
        t = np.linspace(0, 100e-9, 2001)
        period = 40e-9
        v_in = 5.0 * ((t % period) < period / 2)
        v_out = 5.0 - np.interp(t - 2e-9, t, v_in, left=5.0)
        delays = transient_delays(list(zip(t, v_in)), list(zip(t, v_out)), 5.0)
        assert delays["tphl"] == pytest.approx(delays["tplh"], rel=0.05)
        assert delays["worst"] == max(delays["tphl"], delays["tplh"])

    def test_sampled_vs_dense_resample_oracle(self):
        rng = random.Random(31)
        for _ in range(20):
            edge = rng.uniform(8e-9, 12e-9)
            slope_ns = rng.uniform(0.5, 2.0)
            t_coarse = np.linspace(0, 40e-9, 81)
            t_dense = np.linspace(0, 40e-9, 8001)

            def out_wave(t):
                return 5.0 - np.clip((t - edge) / (slope_ns * 1e-9), 0, 1) * 5.0

            v_in = lambda t: np.clip((t - 5e-9) / 1e-10, 0, 1) * 5.0
            coarse = transient_delays(
                list(zip(t_coarse, v_in(t_coarse))), list(zip(t_coarse, out_wave(t_coarse))), 5.0
            )
            dense = transient_delays(
                list(zip(t_dense, v_in(t_dense))), list(zip(t_dense, out_wave(t_dense))), 5.0
            )
            step = t_coarse[1] - t_coarse[0]
            assert abs(coarse["tphl"] - dense["tphl"]) <= step

    def test_never_crossing_raises(self):
        t = np.linspace(0, 10e-9, 101)
        v_in = list(zip(t, np.clip((t - 1e-9) / 1e-10, 0, 1) * 5.0))
        v_out = [(x, 4.0) for x in t]
        with pytest.raises(DelayError):
            transient_delays(v_in, v_out, 5.0)


class TestNoiseMargins:
    def test_ideal_step_vtc(self):
        # Sub-mV sampling around the step: the slope estimate spreads over
        # one grid interval, so the grid must resolve the 1 mV tolerance.
        vin = np.concatenate(
            [
                np.linspace(0, 2.45, 50, endpoint=False),
                np.linspace(2.45, 2.55, 501),
                np.linspace(2.5502, 5, 50),
            ]
        )
        vout = np.where(vin < 2.5, 5.0, 0.0)
        m = noise_margins(list(zip(vin, vout)), vdd=5.0)
        assert m.nmh == pytest.approx(2.5, abs=1e-3)
        assert m.nml == pytest.approx(2.5, abs=1e-3)

    @staticmethod
    def smooth_vtc(gain, vm=2.5, n=2001):
        vin = np.linspace(0, 5, n)
        vout = 5.0 / (1.0 + np.exp(gain * (vin - vm)))
        return vin, vout

    def test_smooth_vtc_vs_fine_slope_scan(self):
        for gain in (4.0, 8.0, 16.0):
            vin, vout = self.smooth_vtc(gain)
            m = noise_margins(list(zip(vin, vout)), 5.0)
            vin10, vout10 = self.smooth_vtc(gain, n=20001)
            m10 = noise_margins(list(zip(vin10, vout10)), 5.0)
            assert m.vil == pytest.approx(m10.vil, abs=1e-3)
            assert m.vih == pytest.approx(m10.vih, abs=1e-3)

    def test_threshold_filter_partition(self):
        # The 1.25 V margin rule must split a sweep identically to the oracle.
        accepted, oracle_accepted = [], []
        for gain in np.linspace(1.2, 12.0, 15):
            vin, vout = self.smooth_vtc(float(gain))
            try:
                m = noise_margins(list(zip(vin, vout)), 5.0)
                ok = m.nmh >= 1.25 and m.nml >= 1.25
            except MarginError:
                ok = False
            accepted.append(ok)
            vin10, vout10 = self.smooth_vtc(float(gain), n=20001)
            try:
                m10 = noise_margins(list(zip(vin10, vout10)), 5.0)
                ok10 = m10.nmh >= 1.25 and m10.nml >= 1.25
            except MarginError:
                ok10 = False
            oracle_accepted.append(ok10)
        assert accepted == oracle_accepted
        assert any(accepted) and not all(accepted)

    def test_shallow_curve_raises(self):
        vin = np.linspace(0, 5, 100)
        vout = 2.6 - 0.04 * vin
        with pytest.raises(MarginError):
            noise_margins(list(zip(vin, vout)), 5.0)

    def test_margin_sum_identity(self):
        for gain in (3.0, 6.0, 10.0):
            vin, vout = self.smooth_vtc(gain)
            m = noise_margins(list(zip(vin, vout)), 5.0)
            assert m.nmh + m.nml <= (m.voh - m.vol) + 1e-9


class TestS11Summary:
    @staticmethod
    def notch_trace(f0=2.4e9, depth_db=-16.7, q=30.0, n=101):
        freq = np.linspace(2.0e9, 3.0e9, n)
        gamma0 = 10 ** (depth_db / 20)
        r = 50 * (1 + gamma0) / (1 - gamma0)
        beta = q * (freq / f0 - f0 / freq)
        z = r / (1 + 1j * beta)
        s11 = 20 * np.log10(np.abs((z - 50) / (z + 50)))
        return list(zip(freq, s11))

    def test_summary_fields(self):
        trace = self.notch_trace()
        s = s11_summary(trace, 2.4e9)
        assert s["s11_min_db"] == pytest.approx(-16.7, abs=0.01)
        assert s["f_res_hz"] == pytest.approx(2.4e9, abs=10e6)
        assert s["s11_at_target_db"] == pytest.approx(-16.7, abs=0.05)
        assert len(s["band_edges_hz"]) == 1
        lo, hi = s["band_edges_hz"][0]
        assert lo < 2.4e9 < hi

    def test_flat_trace_no_band(self):
        freq = np.linspace(2.0e9, 3.0e9, 101)
        trace = [(f, -3.0) for f in freq]
        s = s11_summary(trace, 2.5e9)
        assert s["band_edges_hz"] == []

    def test_target_outside_sweep(self):
        with pytest.raises(SummaryError):
            s11_summary(self.notch_trace(), 5e9)


class TestParetoFront:
    def test_single_point(self):
        p = ParetoPoint(1.0, 2.0, "only")
        assert pareto_front([p]) == [p]

    def test_dominated_point_excluded(self):
        a = ParetoPoint(1.0, 1.0, "a")
        b = ParetoPoint(2.0, 2.0, "b")
        assert pareto_front([b, a]) == [a]

    def test_duplicates_kept_as_antichain(self):
        a = ParetoPoint(1.0, 1.0, "a")
        b = ParetoPoint(1.0, 1.0, "b")
        front = pareto_front([a, b])
        assert len(front) == 2

    def test_matches_quadratic_oracle_100_seeds(self):
        for seed in range(100):
            rng = random.Random(seed)
            points = [
                ParetoPoint(rng.uniform(0.1, 10), rng.uniform(0.1, 10), f"p{i}")
                for i in range(1000)
            ]
            front = pareto_front(points)
            oracle = [
                p
                for p in points
                if not any(dominates(q, p) for q in points)
            ]
            assert sorted(front, key=lambda p: (p.power_w, p.delay_s, p.label)) == sorted(
                oracle, key=lambda p: (p.power_w, p.delay_s, p.label)
            )
            # Antichain: no member dominates another.
            for i, p in enumerate(front):
                for q in front[i + 1 :]:
                    assert not dominates(p, q) and not dominates(q, p)

    def test_union_preserved(self):
        rng = random.Random(5)
        points = [ParetoPoint(rng.uniform(1, 5), rng.uniform(1, 5), str(i)) for i in range(200)]
        front = set(pareto_front(points))
        dominated = [p for p in points if p not in front]
        assert front | set(dominated) == set(points)

    def test_sorted_by_power(self):
        rng = random.Random(6)
        points = [ParetoPoint(rng.uniform(1, 5), rng.uniform(1, 5), str(i)) for i in range(300)]
        front = pareto_front(points)
        powers = [p.power_w for p in front]
        assert powers == sorted(powers)


class TestPdp:
    def test_milliwatt_nanosecond(self):
        assert pdp(1e-3, 1e-9) == pytest.approx(1e-12)

    def test_argmin_matches_exhaustive(self):
        rng = random.Random(9)
        sweep = [(rng.uniform(1e-4, 1e-2), rng.uniform(1e-10, 1e-8)) for _ in range(500)]
        by_pdp = min(range(len(sweep)), key=lambda i: pdp(*sweep[i]))
        by_product = min(range(len(sweep)), key=lambda i: sweep[i][0] * sweep[i][1])
        assert by_pdp == by_product

    def test_positive_inputs_required(self):
        with pytest.raises(ValueError):
            pdp(0.0, 1e-9)


class FakeLog:
    def __init__(self, category, problem_id, passed):
        self.category = category
        self.problem_id = problem_id
        self._passed = passed

    def stage_passed(self, stage):
        return self._passed


class TestPassRateMatrix:
    def test_counts_match_recount_oracle(self):
        rng = random.Random(12)
        logs = []
        expected = {}
        for pid in range(1, 21):
            cat = f"cat{pid % 3}"
            passes = rng.randint(0, 5)
            expected[(cat, pid, "implement")] = passes
            flags = [True] * passes + [False] * (5 - passes)
            rng.shuffle(flags)
            logs.extend(FakeLog(cat, pid, f) for f in flags)
        matrix, pct = pass_rate_matrix(logs, "implement")
        assert matrix.cells == expected
        oracle_pct = 100 * sum(1 for v in expected.values() if v) / len(expected)
        assert pct == pytest.approx(oracle_pct)

    def test_all_fail_zero_pct(self):
        logs = [FakeLog("c", pid, False) for pid in range(1, 6) for _ in range(3)]
        _matrix, pct = pass_rate_matrix(logs, "implement")
        assert pct == 0.0

    def test_inconsistent_runs_rejected(self):
        logs = [FakeLog("c", 1, True)] * 3 + [FakeLog("c", 2, True)] * 2
        with pytest.raises(AggregationError):
            pass_rate_matrix(logs, "implement")

    def test_reorder_invariance(self):
        rng = random.Random(13)
        logs = [FakeLog(f"c{pid % 2}", pid, rng.random() < 0.5) for pid in range(1, 9) for _ in range(4)]
        m1, p1 = pass_rate_matrix(logs, "implement")
        shuffled = logs[:]
        rng.shuffle(shuffled)
        m2, p2 = pass_rate_matrix(shuffled, "implement")
        assert m1 == m2 and p1 == p2


class TestSummaryStats:
    def test_constant_sample(self):
        s = summary_stats([2, 2, 2])
        assert s["mean"] == 2 and s["p50"] == 2

    def test_singleton(self):
        s = summary_stats([7.5])
        assert all(v == 7.5 for v in s.values())

    def test_matches_sort_oracle(self):
        rng = random.Random(14)
        samples = [rng.uniform(-100, 100) for _ in range(10_000)]
        s = summary_stats(samples)
        arr = sorted(samples)
        assert s["min"] == pytest.approx(arr[0])
        assert s["max"] == pytest.approx(arr[-1])
        assert s["mean"] == pytest.approx(sum(samples) / len(samples))

        def quantile(q):
            pos = q * (len(arr) - 1)
            lo = math.floor(pos)
            frac = pos - lo
            hi = min(lo + 1, len(arr) - 1)
            return arr[lo] * (1 - frac) + arr[hi] * frac

        assert s["p25"] == pytest.approx(quantile(0.25))
        assert s["p50"] == pytest.approx(quantile(0.50))
        assert s["p75"] == pytest.approx(quantile(0.75))

    def test_empty_rejected(self):
        with pytest.raises(StatsError):
            summary_stats([])


class TestCsvEmitters:
    def test_trace_csv_shape(self):
        text = trace_csv([(1.0, -3.0), (2.0, -6.0)], "f", "s11")
        lines = text.strip().splitlines()
        assert lines[0] == "f,s11"
        assert len(lines) == 3

    def test_series_csv(self):
        text = series_csv([(0.7, 55.0, 89.0)], ("bias", "gain", "pm"))
        assert text.splitlines()[1] == "0.7,55,89"

    def test_matrix_csv_rows(self):
        logs = [FakeLog("c", 1, True), FakeLog("c", 1, False)]
        matrix, _ = pass_rate_matrix(logs, "implement")
        text = matrix_csv(matrix)
        assert "c,1,implement,1,2" in text
