"""HTTP JSON API over the analysis library.

The app is built once from an inventory, its profiles, vehicle
statistics, and an optional model checkpoint, all of which stay
immutable for the life of the process; a reload means a restart. Every
response is a pure function of (loaded data, request), so handlers are
reentrant and repeated identical requests return identical bodies.
Network summaries are memoized per scenario, which only short-circuits
recomputing that same pure function.

Error mapping: 404 unknown crossing, 422 invalid request body or a
request the engine cannot satisfy (for example a vehicle longer than
the profile), 409 prediction without a loaded checkpoint.

Cross-origin requests are allowed unconditionally; this service is a
development and analysis backend, not a hardened public API.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, model_validator

from . import __version__
from .errors import CrossClearError
from .geodata import load_inventory
from .hangup import analyze_crossing, analyze_network, summary_to_json
from .neural import load_checkpoint, predict
from .profile import (
    DEFAULT_SPACING_M,
    NUM_CHANNELS,
    ImuGpsSequence,
    Profile,
    load_profile,
    stations_from_speed,
)
from .vehicle import (
    Overhang,
    Scenario,
    VehicleGeometry,
    design_vehicle,
    display_label,
    load_bundled_stats,
)

MAX_CURVE_POINTS = 2000


# --------------------------------------------------------------------------
# request / response schemas
# --------------------------------------------------------------------------

class OverhangSpec(BaseModel):
    length_m: float = Field(gt=0)
    clearance_m: float = Field(gt=0)


class VehicleSpec(BaseModel):
    """Explicit geometry for what-if requests."""

    wheelbase_m: float = Field(gt=0)
    clearance_wheelbase_m: float = Field(gt=0)
    front_overhang: OverhangSpec | None = None
    rear_overhang: OverhangSpec | None = None
    label: str = "custom"

    def to_geometry(self) -> VehicleGeometry:
        def conv(spec):
            return None if spec is None else Overhang(spec.length_m, spec.clearance_m)
        return VehicleGeometry(
            wheelbase=self.wheelbase_m,
            clearance_wheelbase=self.clearance_wheelbase_m,
            front_overhang=conv(self.front_overhang),
            rear_overhang=conv(self.rear_overhang),
            label=self.label,
        )


class WhatIfRequest(BaseModel):
    """One profile source and one vehicle source, nothing else.

    Profile: crossing_id (loaded inventory) or profile_points (inline
    station, elevation pairs). Vehicle: vehicle_type plus scenario, or
    an explicit VehicleSpec.
    """

    crossing_id: str | None = None
    profile_points: list[tuple[float, float]] | None = None
    vehicle_type: str | None = None
    scenario: Scenario | None = None
    vehicle: VehicleSpec | None = None
    resample_spacing: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_of_each(self):
        if (self.crossing_id is None) == (self.profile_points is None):
            raise ValueError(
                "provide exactly one profile source: crossing_id or profile_points")
        explicit = self.vehicle is not None
        if (self.vehicle_type is not None) == explicit:
            raise ValueError(
                "provide exactly one vehicle source: vehicle_type or vehicle")
        if self.vehicle_type is not None and self.scenario is None:
            raise ValueError("vehicle_type requires a scenario")
        if explicit and self.scenario is not None:
            raise ValueError("scenario only applies with vehicle_type")
        return self


class VehicleEcho(BaseModel):
    label: str
    wheelbase_m: float
    clearance_wheelbase_m: float
    front_overhang: OverhangSpec | None
    rear_overhang: OverhangSpec | None


class WhatIfResponse(BaseModel):
    delta_min_m: float
    level: int
    worst_rear_axle_station_m: float
    worst_interference_station_m: float
    clearance_curve: list[tuple[float, float]]
    vehicle: VehicleEcho


class PredictRequest(BaseModel):
    timestamps: list[float] = Field(min_length=2)
    channels: list[list[float]]
    crossing_id: str | None = None

    @model_validator(mode="after")
    def _rectangular(self):
        if len(self.channels) != len(self.timestamps):
            raise ValueError("channels must have one row per timestamp")
        for i, row in enumerate(self.channels):
            if len(row) != NUM_CHANNELS:
                raise ValueError(
                    f"channels row {i} has {len(row)} values, expected {NUM_CHANNELS}")
        return self


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _decimate(curve: np.ndarray, limit: int = MAX_CURVE_POINTS) -> list:
    """Uniform-stride thinning; only for transport, never for analysis."""
    stride = max(1, math.ceil(len(curve) / limit))
    return [(float(s), float(d)) for s, d in curve[::stride]]


def _echo(vehicle: VehicleGeometry) -> VehicleEcho:
    def conv(oh):
        return None if oh is None else OverhangSpec(length_m=oh.length,
                                                    clearance_m=oh.clearance)
    return VehicleEcho(
        label=vehicle.label,
        wheelbase_m=vehicle.wheelbase,
        clearance_wheelbase_m=vehicle.clearance_wheelbase,
        front_overhang=conv(vehicle.front_overhang),
        rear_overhang=conv(vehicle.rear_overhang),
    )


def _stats_doc(stats) -> dict:
    types = []
    for slug in stats.types:
        ts = stats.for_type(slug)
        entry = {
            "slug": slug,
            "label": display_label(slug),
            "count": ts.count,
            "wheelbase_m": {"p50": ts.wheelbase_p50, "p75": ts.wheelbase_p75,
                            "max": ts.wheelbase_max},
            "clearance_m": {"min": ts.clearance_min, "p25": ts.clearance_p25,
                            "p50": ts.clearance_p50},
            "front_overhang": _overhang_doc(ts.front_overhang_length,
                                            ts.front_overhang_clearance),
            "rear_overhang": _overhang_doc(ts.rear_overhang_length,
                                           ts.rear_overhang_clearance),
        }
        types.append(entry)
    return {"scenarios": [s.value for s in Scenario], "vehicle_types": types}


def _overhang_doc(length, clearance):
    if length is None and clearance is None:
        return None
    return {"length_m": length, "clearance_m": clearance}


# --------------------------------------------------------------------------
# app factory
# --------------------------------------------------------------------------

def create_app(*, inventory=None, profiles=None, stats=None, model=None,
               spacing: float = DEFAULT_SPACING_M,
               inventory_path=None, checkpoint_path=None) -> FastAPI:
    """Assemble the service around already-loaded data or file paths.

    inventory: list of CrossingRecord. profiles: dict crossing_id ->
    Profile. When inventory_path is given instead, both are loaded from
    disk with profile paths resolved relative to the inventory file.
    """
    if inventory_path is not None:
        inventory_path = Path(inventory_path)
        inventory = load_inventory(inventory_path)
        profiles = {}
        for rec in inventory:
            if rec.profile_path:
                prof = load_profile(inventory_path.parent / rec.profile_path)
                profiles[rec.crossing_id] = Profile(
                    prof.stations, prof.elevations, crossing_id=rec.crossing_id)
    inventory = list(inventory) if inventory else []
    profiles = dict(profiles) if profiles else {}
    stats = stats if stats is not None else load_bundled_stats()
    if checkpoint_path is not None:
        model = load_checkpoint(checkpoint_path)

    by_id = {rec.crossing_id: rec for rec in inventory}
    vehicles_doc = _stats_doc(stats)

    @lru_cache(maxsize=len(Scenario))
    def network_summary(scenario: Scenario):
        crossings = [(cid, prof) for cid, prof in sorted(profiles.items())]
        return analyze_network(crossings, stats, scenario, stats.types,
                               spacing=spacing)

    app = FastAPI(title="crossclear", version=__version__)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.get("/api/crossings")
    def crossings(scenario: Scenario = Scenario.WORST) -> dict:
        worst = (network_summary(scenario).worst_level_by_crossing
                 if profiles else {})
        items = []
        for rec in inventory:
            items.append({
                "crossing_id": rec.crossing_id,
                "latitude": rec.latitude,
                "longitude": rec.longitude,
                "county": rec.county,
                "city": rec.city,
                "street": rec.street,
                "highway": rec.highway,
                "railroad_division": rec.railroad_division,
                "railroad_subdivision": rec.railroad_subdivision,
                "has_profile": rec.crossing_id in profiles,
                "worst_level": worst.get(rec.crossing_id),
            })
        return {"scenario": scenario.value, "crossings": items}

    @app.get("/api/crossings/{crossing_id}/profile")
    def crossing_profile(crossing_id: str) -> dict:
        prof = profiles.get(crossing_id)
        if prof is None:
            raise HTTPException(404, f"unknown crossing {crossing_id!r} "
                                     "or no profile on file")
        return {
            "crossing_id": crossing_id,
            "stations": prof.stations.tolist(),
            "elevations": prof.elevations.tolist(),
            "length_m": prof.length,
        }

    @app.get("/api/vehicles")
    def vehicles() -> dict:
        return vehicles_doc

    @app.post("/api/hangup")
    def hangup(req: WhatIfRequest) -> WhatIfResponse:
        if req.crossing_id is not None:
            profile = profiles.get(req.crossing_id)
            if profile is None:
                raise HTTPException(404, f"unknown crossing {req.crossing_id!r} "
                                         "or no profile on file")
        else:
            pts = np.asarray(req.profile_points, dtype=np.float64)
            try:
                profile = Profile(pts[:, 0], pts[:, 1], crossing_id="inline")
            except ValueError as exc:
                raise HTTPException(422, f"profile_points: {exc}") from None
        if req.vehicle is not None:
            vehicle = req.vehicle.to_geometry()
        else:
            try:
                vehicle = design_vehicle(stats, req.vehicle_type, req.scenario)
            except KeyError as exc:
                raise HTTPException(422, str(exc.args[0])) from None
        try:
            result = analyze_crossing(profile, vehicle,
                                      spacing=req.resample_spacing or spacing)
        except CrossClearError as exc:
            raise HTTPException(422, str(exc)) from None
        return WhatIfResponse(
            delta_min_m=result.delta_min,
            level=result.level,
            worst_rear_axle_station_m=result.worst_rear_axle_station,
            worst_interference_station_m=result.worst_interference_station,
            clearance_curve=_decimate(result.clearance_curve),
            vehicle=_echo(vehicle),
        )

    @app.post("/api/predict")
    def predict_profile(req: PredictRequest) -> dict:
        if model is None:
            raise HTTPException(409, "no model checkpoint loaded")
        seq = ImuGpsSequence(
            np.asarray(req.timestamps, dtype=np.float64),
            np.asarray(req.channels, dtype=np.float64),
            crossing_id=req.crossing_id or "request",
        )
        elevations = predict(model, seq.channels)
        stations = stations_from_speed(seq)
        doc = {
            "crossing_id": seq.crossing_id,
            "elevations": elevations.tolist(),
            "stations_from_speed": stations is not None,
        }
        if stations is None:
            stations = np.arange(len(seq), dtype=np.float64)
        doc["stations"] = stations.tolist()
        return doc

    @app.get("/api/network/summary")
    def network(scenario: Scenario) -> dict:
        if not profiles:
            raise HTTPException(404, "no profiles loaded")
        return json.loads(summary_to_json(network_summary(scenario)))

    return app
