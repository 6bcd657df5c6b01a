import random

import pytest

from edaloop.reports import (
    LogDigest,
    LogEntry,
    PowerReport,
    ReportError,
    TimingReport,
    UtilizationReport,
    parse_metrics,
    parse_power,
    parse_timing,
    parse_utilization,
    scan_log,
    write_log,
    write_metrics,
    write_power,
    write_timing,
    write_utilization,
)

from conftest import FIXTURES


class TestMetrics:
    def test_basic_line(self):
        report = parse_metrics("dc_gain_db = 42.1 dB\n")
        assert report.entries["dc_gain_db"] == (42.1, "dB")

    def test_empty_file(self):
        report = parse_metrics("")
        assert report.entries == {}

    def test_unknown_lines_tallied(self):
        report = parse_metrics("junk line\nugb_hz = 1e6 Hz\nanother ???\n")
        assert report.unknown_lines == 2
        assert report.entries["ugb_hz"][0] == 1e6

    def test_duplicate_key_rejected(self):
        with pytest.raises(ReportError):
            parse_metrics("a = 1 V\na = 2 V\n")

    def test_writer_parser_round_trip_randomized(self):
        rng = random.Random(17)
        units = ["dB", "Hz", "W", "V", "", "s"]
        for _ in range(100):
            entries = {}
            for i in range(rng.randint(1, 8)):
                entries[f"metric_{i}"] = (
                    round(rng.uniform(-1e6, 1e6), 6),
                    rng.choice(units),
                )
            parsed = parse_metrics(write_metrics(entries))
            assert parsed.entries == entries


class TestTables:
    def test_zero_lut_row(self):
        text = "| Slice LUTs | 0 |\n| Slice Registers | 6 |\n| Block RAM Tile | 0 |\n| DSPs | 0 |\n| Bonded IOB | 5 |\n"
        assert parse_utilization(text).lut == 0

    def test_thousands_separators_accepted(self):
        text = (FIXTURES / "reports" / "utilization_extra.rpt").read_text()
        report = parse_utilization(text)
        assert (report.lut, report.ff) == (1204, 2310)

    def test_missing_row_named(self):
        with pytest.raises(ReportError) as err:
            parse_utilization("| Slice LUTs | 3 |\n")
        assert "Slice Registers" in str(err.value)

    def test_timing_additivity_holds(self):
        report = parse_timing(
            "| Data Path Delay | 1.0 |\n| Logic Delay | 0.4 |\n"
            "| Route Delay | 0.6 |\n| Achieved Period | 2.0 |\n"
        )
        assert report.data_path_ns == 1.0

    def test_timing_additivity_violation_rejected(self):
        with pytest.raises(ReportError):
            parse_timing(
                "| Data Path Delay | 1.0 |\n| Logic Delay | 0.2 |\n"
                "| Route Delay | 0.6 |\n| Achieved Period | 2.0 |\n"
            )

    def test_power_additivity(self):
        report = parse_power(
            "| Total On-Chip Power | 0.105 |\n| Dynamic | 0.093 |\n| Device Static | 0.012 |\n"
        )
        assert report.total_w == pytest.approx(0.105)
        with pytest.raises(ReportError):
            parse_power(
                "| Total On-Chip Power | 0.2 |\n| Dynamic | 0.093 |\n| Device Static | 0.012 |\n"
            )

    def test_clock_conversion_round_trip(self):
        # f = 1000 / period(ns) in MHz; exact to 1 kHz on round trip.
        for period in (0.9009, 1.0, 2.5, 7.3333):
            report = TimingReport(0.5, 0.2, 0.3, period)
            freq = report.clock_freq_hz()
            assert abs(1e9 / freq - period) < 1e-12
            assert abs(freq - 1e9 / period) < 1e3

    def test_fixture_corpus_parses_clean(self):
        reports_dir = FIXTURES / "reports"
        parsed = 0
        for path in sorted(reports_dir.glob("utilization_*.rpt")):
            parse_utilization(path.read_text())
            parsed += 1
        for path in sorted(reports_dir.glob("timing_*.rpt")):
            parse_timing(path.read_text())
            parsed += 1
        for path in sorted(reports_dir.glob("power_*.rpt")):
            parse_power(path.read_text())
            parsed += 1
        assert parsed >= 20

    def test_writers_round_trip(self):
        util = UtilizationReport(1204, 2310, 4, 6, 37)
        assert parse_utilization(write_utilization(util)) == util
        timing = TimingReport(1.0, 0.4, 0.6, 0.9009)
        assert parse_timing(write_timing(timing)) == timing
        power = PowerReport(0.105, 0.093, 0.012)
        assert parse_power(write_power(power)) == power

    def test_unknown_sections_ignored(self):
        text = (
            "Some banner\n| Weird Row | 9 |\n"
            "| Slice LUTs | 12 |\n| Slice Registers | 3 |\n| Block RAM Tile | 0 |\n"
            "| DSPs | 0 |\n| Bonded IOB | 2 |\n| Another | x |\n"
        )
        assert parse_utilization(text).lut == 12


class TestScanLog:
    def test_two_errors_in_order(self):
        digest = scan_log(
            "ERROR: [A 1-1] first problem\nok line\nERROR: [B 2-2] second problem\n"
        )
        assert [e.code for e in digest.errors] == ["A 1-1", "B 2-2"]

    def test_clean_log_empty(self):
        digest = scan_log("INFO: all good\nDone.\n")
        assert digest.errors == () and digest.critical_warnings == ()

    def test_context_line_captured(self):
        digest = scan_log("ERROR: [X 1-2] bad net\n  three loads unplaced\n")
        assert "three loads unplaced" in digest.errors[0].message

    def test_location_extracted(self):
        digest = scan_log("ERROR: [Route 35-54] unroutable net [top.v:112]\n")
        assert digest.errors[0].location == "top.v:112"

    def test_counts_match_grep_oracle(self):
        text = (FIXTURES / "reports" / "vivado_style.log").read_text()
        digest = scan_log(text)
        grep_errors = sum(1 for l in text.splitlines() if l.startswith("ERROR:"))
        grep_warnings = sum(1 for l in text.splitlines() if l.startswith("CRITICAL WARNING:"))
        assert len(digest.errors) == grep_errors
        assert len(digest.critical_warnings) == grep_warnings

    def test_writer_round_trip(self):
        digest = LogDigest(
            errors=(LogEntry("A 1-1", "first", "f.v:3"), LogEntry("B 2-2", "second")),
            critical_warnings=(LogEntry("C 3-3", "warn here"),),
        )
        assert scan_log(write_log(digest)) == digest
