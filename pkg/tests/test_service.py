import numpy as np
import pytest
from fastapi.testclient import TestClient

from crossclear.neural import HybridModel, ModelConfig, init_params
from crossclear.service import create_app

from conftest import random_imu_channels

HUMP_POINTS = [[0, 0], [3, 0], [9, 0.3], [15, 0], [18, 0]]


@pytest.fixture()
def client(fixture_inventory, three_crossings):
    app = create_app(inventory=fixture_inventory, profiles=three_crossings)
    return TestClient(app)


@pytest.fixture()
def client_with_model(fixture_inventory, three_crossings, tiny_config):
    model = HybridModel(tiny_config, init_params(tiny_config, seed=0))
    app = create_app(inventory=fixture_inventory, profiles=three_crossings,
                     model=model)
    return TestClient(app)


class TestCrossings:
    def test_listing_carries_worst_levels(self, client):
        doc = client.get("/api/crossings?scenario=median").json()
        worst = {c["crossing_id"]: c["worst_level"] for c in doc["crossings"]}
        assert worst == {"XING-FLAT": 1, "XING-MILD": 1, "XING-SEVERE": 4}
        assert all(c["has_profile"] for c in doc["crossings"])

    def test_default_scenario_is_worst(self, client):
        assert client.get("/api/crossings").json()["scenario"] == "worst"

    def test_profile_endpoint(self, client):
        doc = client.get("/api/crossings/XING-MILD/profile").json()
        assert doc["stations"][0] == 0.0 and doc["stations"][-1] == 18.0
        assert max(doc["elevations"]) == 0.1

    def test_unknown_crossing_404(self, client):
        assert client.get("/api/crossings/NOPE/profile").status_code == 404


class TestVehicles:
    def test_bundled_types_and_scenarios(self, client):
        doc = client.get("/api/vehicles").json()
        assert doc["scenarios"] == ["median", "p75-25", "worst"]
        assert len(doc["vehicle_types"]) == 12
        bus = next(v for v in doc["vehicle_types"] if v["slug"] == "school_bus")
        assert bus["wheelbase_m"]["p50"] == 7.01
        belly = next(v for v in doc["vehicle_types"] if v["slug"] == "belly_dump")
        assert belly["wheelbase_m"]["p50"] == 10.06
        assert belly["clearance_m"] == {"min": 0.23, "p25": 0.25, "p50": 0.32}


class TestHangup:
    def test_oracle_value_on_inline_hump(self, client):
        r = client.post("/api/hangup", json={
            "profile_points": HUMP_POINTS,
            "vehicle_type": "low_boy", "scenario": "worst"})
        assert r.status_code == 200
        doc = r.json()
        assert doc["level"] == 4
        assert doc["delta_min_m"] == pytest.approx(-0.11725, abs=1e-4)
        assert doc["worst_interference_station_m"] == pytest.approx(9.0, abs=0.02)
        assert doc["vehicle"]["label"] == "Low Boy (worst)"

    def test_explicit_geometry_equals_design_vehicle(self, client):
        by_type = client.post("/api/hangup", json={
            "profile_points": HUMP_POINTS,
            "vehicle_type": "low_boy", "scenario": "worst"}).json()
        explicit = client.post("/api/hangup", json={
            "profile_points": HUMP_POINTS,
            "vehicle": {"wheelbase_m": 11.89, "clearance_wheelbase_m": 0.18}}).json()
        assert explicit["delta_min_m"] == by_type["delta_min_m"]
        assert explicit["level"] == by_type["level"]
        assert explicit["clearance_curve"] == by_type["clearance_curve"]

    def test_loaded_crossing_by_id(self, client):
        r = client.post("/api/hangup", json={
            "crossing_id": "XING-FLAT",
            "vehicle_type": "low_boy", "scenario": "median"})
        assert r.status_code == 200
        assert r.json()["delta_min_m"] == 0.23

    def test_curve_capped_for_transport(self, client):
        r = client.post("/api/hangup", json={
            "crossing_id": "XING-SEVERE",
            "vehicle_type": "low_boy", "scenario": "median"})
        assert len(r.json()["clearance_curve"]) <= 2000

    def test_repeated_request_identical(self, client):
        body = {"crossing_id": "XING-MILD", "vehicle_type": "tanker",
                "scenario": "p75-25"}
        assert client.post("/api/hangup", json=body).json() == \
            client.post("/api/hangup", json=body).json()

    def test_both_profile_sources_422(self, client):
        r = client.post("/api/hangup", json={
            "crossing_id": "XING-FLAT", "profile_points": HUMP_POINTS,
            "vehicle_type": "low_boy", "scenario": "worst"})
        assert r.status_code == 422

    def test_no_vehicle_source_422(self, client):
        assert client.post("/api/hangup", json={
            "crossing_id": "XING-FLAT"}).status_code == 422

    def test_type_without_scenario_422(self, client):
        assert client.post("/api/hangup", json={
            "crossing_id": "XING-FLAT", "vehicle_type": "low_boy"}).status_code == 422

    def test_unknown_crossing_404(self, client):
        assert client.post("/api/hangup", json={
            "crossing_id": "NOPE", "vehicle_type": "low_boy",
            "scenario": "worst"}).status_code == 404

    def test_unknown_vehicle_type_422(self, client):
        assert client.post("/api/hangup", json={
            "crossing_id": "XING-FLAT", "vehicle_type": "hovercraft",
            "scenario": "worst"}).status_code == 422

    def test_vehicle_longer_than_profile_422(self, client):
        r = client.post("/api/hangup", json={
            "profile_points": [[0, 0], [1, 0]],
            "vehicle_type": "low_boy", "scenario": "worst"})
        assert r.status_code == 422

    def test_unsorted_inline_points_422(self, client):
        r = client.post("/api/hangup", json={
            "profile_points": [[5, 0], [1, 0], [9, 0]],
            "vehicle": {"wheelbase_m": 2.0, "clearance_wheelbase_m": 0.3}})
        assert r.status_code == 422


class TestPredict:
    def _body(self, length=8):
        rng = np.random.default_rng(0)
        channels = random_imu_channels(rng, length)
        return {"timestamps": (np.arange(length) * 0.02).tolist(),
                "channels": channels.tolist()}

    def test_without_checkpoint_409(self, client):
        assert client.post("/api/predict", json=self._body()).status_code == 409

    def test_with_model_returns_series(self, client_with_model):
        r = client_with_model.post("/api/predict", json=self._body(10))
        assert r.status_code == 200
        doc = r.json()
        assert len(doc["elevations"]) == 10
        assert len(doc["stations"]) == 10
        assert doc["stations_from_speed"] is True

    def test_wrong_channel_count_422(self, client_with_model):
        body = self._body(6)
        body["channels"] = [row[:5] for row in body["channels"]]
        assert client_with_model.post("/api/predict", json=body).status_code == 422


class TestNetworkSummary:
    def test_summary_document(self, client):
        doc = client.get("/api/network/summary?scenario=median").json()
        assert doc["scenario"] == "median"
        assert doc["crossings_analyzed"] == 3
        assert doc["worst_level_by_crossing"]["XING-SEVERE"] == 4
        assert set(doc["level_counts"]) == set(doc["vehicle_types"])

    def test_scenario_required_and_validated(self, client):
        assert client.get("/api/network/summary").status_code == 422
        assert client.get("/api/network/summary?scenario=typical").status_code == 422
