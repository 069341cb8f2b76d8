import numpy as np
import pytest

from crossclear.errors import VehicleFitError
from crossclear.hangup import (
    NetworkRow,
    analyze_crossing,
    analyze_network,
    classify_level,
    clearance_at_position,
    min_clearance,
    parse_results_csv,
    results_to_csv,
    rows_to_summary,
    summary_to_json,
)
from crossclear.profile import Profile
from crossclear.vehicle import Overhang, Scenario, VehicleGeometry

from conftest import hump_delta_min, hump_profile


def _vehicle(wheelbase, clearance, front=None, rear=None):
    return VehicleGeometry(wheelbase=wheelbase, clearance_wheelbase=clearance,
                           front_overhang=front, rear_overhang=rear)


class TestClassifyLevel:
    def test_thresholds(self):
        assert classify_level(0.1016) == 1
        assert classify_level(0.1015) == 2
        assert classify_level(0.0508) == 2
        assert classify_level(0.0507) == 3
        assert classify_level(0.0) == 3
        assert classify_level(-1e-12) == 4

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            classify_level(float("nan"))


class TestMinClearance:
    def test_flat_ground_equals_clearance_exactly(self):
        result = min_clearance(hump_profile(0.0), _vehicle(10.0, 0.23))
        assert result.delta_min == 0.23

    def test_flat_ground_with_overhangs_exact(self):
        v = _vehicle(8.0, 0.3, front=Overhang(2.0, 0.45), rear=Overhang(1.5, 0.25))
        result = min_clearance(hump_profile(0.0), v)
        assert result.delta_min == 0.25

    def test_hump_matches_analytic_formula(self):
        result = min_clearance(hump_profile(0.3), _vehicle(10.0, 0.3))
        assert result.delta_min == pytest.approx(hump_delta_min(0.3, 10.0, 0.3),
                                                 abs=1e-4)
        assert result.worst_rear_axle_station == pytest.approx(9.0 - 5.0, abs=0.011)
        assert result.worst_interference_station == pytest.approx(9.0, abs=0.011)

    def test_curve_minimum_is_delta_min(self):
        result = min_clearance(hump_profile(0.2), _vehicle(6.0, 0.25))
        curve = result.clearance_curve
        assert curve[:, 1].min() == result.delta_min
        idx = int(np.argmin(curve[:, 1]))
        assert curve[idx, 0] == result.worst_rear_axle_station

    def test_asymmetric_vehicle_direction_independent(self):
        # a one-sided profile: ramp down after the hump
        profile = Profile([0.0, 6.0, 9.0, 12.0, 20.0], [0.0, 0.0, 0.35, 0.05, 0.0])
        v = _vehicle(7.0, 0.3, front=Overhang(2.5, 0.2))
        forward = min_clearance(profile, v)
        mirrored_profile = Profile(
            (20.0 - profile.stations)[::-1].copy(),
            profile.elevations[::-1].copy(),
        )
        backward = min_clearance(mirrored_profile, v)
        assert forward.delta_min == pytest.approx(backward.delta_min, abs=1e-9)

    def test_too_short_profile_raises(self):
        with pytest.raises(VehicleFitError, match="cannot hold"):
            min_clearance(Profile([0.0, 5.0], [0.0, 0.0]), _vehicle(10.0, 0.3))

    def test_overhang_governs_when_lower(self):
        # deep dip under the rear overhang only
        profile = Profile([0.0, 2.0, 2.5, 3.0, 20.0], [0.0, 0.0, -0.5, 0.0, 0.0])
        with_oh = _vehicle(10.0, 0.4, rear=Overhang(2.0, 0.05))
        result = min_clearance(profile, with_oh)
        # chord over the dip from the wheelbase alone is much higher
        assert result.delta_min < 0.3


class TestClearanceAtPosition:
    def test_matches_sweep_at_worst_position(self):
        profile = hump_profile(0.3)
        v = _vehicle(10.0, 0.3)
        swept = min_clearance(profile, v)
        delta, interference = clearance_at_position(
            profile, v, swept.worst_rear_axle_station)
        assert delta == pytest.approx(swept.delta_min, abs=1e-6)
        assert interference == pytest.approx(swept.worst_interference_station,
                                             abs=0.011)

    def test_out_of_range_position_raises(self):
        with pytest.raises(VehicleFitError):
            clearance_at_position(hump_profile(0.1), _vehicle(10.0, 0.3), 15.0)


class TestAnalyzeCrossing:
    def test_sets_level(self):
        result = analyze_crossing(hump_profile(0.5), _vehicle(10.36, 0.23))
        assert result.level == 4

    def test_flat_is_level_1(self):
        assert analyze_crossing(hump_profile(0.0), _vehicle(10.0, 0.23)).level == 1


class TestAnalyzeNetwork:
    def test_fixture_counts(self, three_crossings, stats):
        summary = analyze_network(three_crossings.items(), stats,
                                  Scenario.MEDIAN, ["low_boy"])
        assert [r.level for r in summary.rows] == [1, 1, 4]
        assert summary.level_counts["low_boy"] == {1: 2, 2: 0, 3: 0, 4: 1}
        assert summary.worst_level_by_crossing == {
            "XING-FLAT": 1, "XING-MILD": 1, "XING-SEVERE": 4}
        assert summary.worst_level_counts == {1: 2, 2: 0, 3: 0, 4: 1}

    def test_rows_sorted_by_crossing_then_type(self, three_crossings, stats):
        summary = analyze_network(three_crossings.items(), stats,
                                  Scenario.MEDIAN, ["tanker", "low_boy"])
        keys = [(r.crossing_id, r.vehicle_type) for r in summary.rows]
        assert keys == sorted(keys)

    def test_jobs_do_not_change_output(self, three_crossings, stats):
        seq = analyze_network(three_crossings.items(), stats,
                              Scenario.WORST, ["low_boy", "tanker"])
        par = analyze_network(three_crossings.items(), stats,
                              Scenario.WORST, ["low_boy", "tanker"], jobs=4)
        assert results_to_csv(seq.rows) == results_to_csv(par.rows)
        assert seq.worst_level_by_crossing == par.worst_level_by_crossing

    def test_unfit_pair_recorded_not_fatal(self, stats):
        crossings = [("SHORT", Profile([0.0, 3.0], [0.0, 0.0])),
                     ("LONG", hump_profile(0.1, "LONG"))]
        summary = analyze_network(crossings, stats, Scenario.MEDIAN, ["low_boy"])
        assert len(summary.errors) == 1
        assert summary.errors[0][:2] == ("SHORT", "low_boy")
        assert [r.crossing_id for r in summary.rows] == ["LONG"]

    def test_empty_inventory_rejected(self, stats):
        with pytest.raises(ValueError):
            analyze_network([], stats, Scenario.MEDIAN, ["low_boy"])


class TestResultsCsv:
    def test_round_trip(self, three_crossings, stats):
        summary = analyze_network(three_crossings.items(), stats,
                                  Scenario.MEDIAN, ["low_boy", "flatbed"])
        text = results_to_csv(summary.rows)
        rows = parse_results_csv(text)
        assert results_to_csv(rows) == text
        rebuilt = rows_to_summary(rows)
        assert rebuilt.worst_level_by_crossing == summary.worst_level_by_crossing
        assert rebuilt.level_counts == summary.level_counts

    def test_summary_json_is_deterministic(self, three_crossings, stats):
        summary = analyze_network(three_crossings.items(), stats,
                                  Scenario.MEDIAN, ["low_boy"])
        assert summary_to_json(summary) == summary_to_json(summary)
        assert '"worst_level_by_crossing"' in summary_to_json(summary)

    def test_mixed_scenarios_rejected(self):
        rows = [
            NetworkRow("A", "low_boy", Scenario.MEDIAN, 0.1, 0.0, 2),
            NetworkRow("B", "low_boy", Scenario.WORST, 0.1, 0.0, 2),
        ]
        with pytest.raises(ValueError, match="scenario"):
            rows_to_summary(rows)
