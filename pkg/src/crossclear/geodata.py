"""Crossing inventory and GeoJSON risk-map export.

The inventory is a flat CSV of crossings with WGS84 coordinates and
optional descriptive fields. Risk maps are emitted as GeoJSON
FeatureCollections of Point features, one per (crossing, result), with
coordinates in [longitude, latitude] order and a marker-color property
encoding the hang-up level:

    level 1  #2ecc40  (green)
    level 2  #ffdc00  (yellow)
    level 3  #ff851b  (orange)
    level 4  #ff4136  (red)

Exports go through one serializer, so parse -> re-serialize is
byte-identical.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError
from .hangup import NetworkSummary
from .vehicle import display_label

INVENTORY_HEADER = [
    "crossing_id",
    "latitude",
    "longitude",
    "county",
    "city",
    "street",
    "highway",
    "railroad_division",
    "railroad_subdivision",
    "profile_path",
]

LEVEL_COLORS = {1: "#2ecc40", 2: "#ffdc00", 3: "#ff851b", 4: "#ff4136"}

# Decimal places kept in exported coordinates (~0.1 m of longitude).
COORDINATE_DECIMALS = 6


@dataclass(frozen=True)
class CrossingRecord:
    """One inventoried crossing; optional fields are None when absent."""

    crossing_id: str
    latitude: float
    longitude: float
    county: str | None = None
    city: str | None = None
    street: str | None = None
    highway: str | None = None
    railroad_division: str | None = None
    railroad_subdivision: str | None = None
    profile_path: str | None = None

    def __post_init__(self):
        if not self.crossing_id:
            raise ValueError("crossing_id must be non-empty")
        if not (-90.0 <= self.latitude <= 90.0):
            raise ValueError(f"latitude {self.latitude} outside [-90, 90]")
        if not (-180.0 <= self.longitude <= 180.0):
            raise ValueError(f"longitude {self.longitude} outside [-180, 180]")


def parse_inventory_csv(text: str, *, source: str | None = None) -> list[CrossingRecord]:
    """Parse and validate an inventory; duplicate crossing IDs rejected."""
    records = []
    seen = set()
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([raw]))]
        if not header_seen:
            if fields != INVENTORY_HEADER:
                raise ParseError(
                    f"expected header {','.join(INVENTORY_HEADER)!r}",
                    source=source, row=lineno,
                )
            header_seen = True
            continue
        if len(fields) != len(INVENTORY_HEADER):
            raise ParseError(
                f"expected {len(INVENTORY_HEADER)} columns, got {len(fields)}",
                source=source, row=lineno,
            )
        row = dict(zip(INVENTORY_HEADER, fields))
        try:
            lat = float(row["latitude"])
            lon = float(row["longitude"])
        except ValueError:
            raise ParseError("non-numeric coordinate", source=source, row=lineno,
                             column="latitude/longitude") from None
        if row["crossing_id"] in seen:
            raise ParseError(f"duplicate crossing_id {row['crossing_id']!r}",
                             source=source, row=lineno, column="crossing_id")
        try:
            rec = CrossingRecord(
                crossing_id=row["crossing_id"],
                latitude=lat,
                longitude=lon,
                **{k: (row[k] or None) for k in INVENTORY_HEADER[3:]},
            )
        except ValueError as exc:
            raise ParseError(str(exc), source=source, row=lineno) from None
        seen.add(rec.crossing_id)
        records.append(rec)
    if not header_seen:
        raise ParseError("empty file: header row missing", source=source)
    return records


def load_inventory(path) -> list[CrossingRecord]:
    path = Path(path)
    return parse_inventory_csv(path.read_text(encoding="utf-8"), source=str(path))


def geojson_dumps(doc: dict) -> str:
    """The one serializer used for every GeoJSON export (stable bytes)."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _feature(record: CrossingRecord, properties: dict) -> dict:
    props = dict(properties)
    for key in ("county", "city", "street", "highway"):
        value = getattr(record, key)
        if value is not None:
            props[key] = value
    return {
        "type": "Feature",
        "geometry": {
            "type": "Point",
            "coordinates": [
                round(record.longitude, COORDINATE_DECIMALS),
                round(record.latitude, COORDINATE_DECIMALS),
            ],
        },
        "properties": props,
    }


def export_geojson(inventory, results) -> str:
    """Render per-result Point features against the inventory.

    results: iterables with crossing_id, delta_min, level, and either a
    vehicle_label (single analyses) or vehicle_type + scenario (batch
    rows). Every crossing_id must exist in the inventory.
    """
    by_id = {rec.crossing_id: rec for rec in inventory}
    unknown = sorted({r.crossing_id for r in results} - set(by_id))
    if unknown:
        raise ValueError(f"results reference unknown crossing ids: {', '.join(unknown)}")

    features = []
    for r in sorted(results, key=lambda r: (r.crossing_id, getattr(r, "vehicle_type", ""))):
        if r.level is None:
            raise ValueError(f"unclassified result for crossing {r.crossing_id!r}")
        label = getattr(r, "vehicle_label", None) or display_label(r.vehicle_type)
        scenario = getattr(r, "scenario", None)
        features.append(_feature(by_id[r.crossing_id], {
            "crossing_id": r.crossing_id,
            "vehicle_label": label,
            "scenario": scenario.value if scenario is not None else None,
            "delta_min_m": round(r.delta_min, 6),
            "level": r.level,
            "marker-color": LEVEL_COLORS[r.level],
        }))
    return geojson_dumps({"type": "FeatureCollection", "features": features})


def export_worst_level_geojson(inventory, summary: NetworkSummary) -> str:
    """Combined layer: one feature per crossing at its worst level."""
    by_id = {rec.crossing_id: rec for rec in inventory}
    unknown = sorted(set(summary.worst_level_by_crossing) - set(by_id))
    if unknown:
        raise ValueError(f"summary references unknown crossing ids: {', '.join(unknown)}")
    features = []
    for crossing_id, level in sorted(summary.worst_level_by_crossing.items()):
        features.append(_feature(by_id[crossing_id], {
            "crossing_id": crossing_id,
            "vehicle_label": "worst over analyzed types",
            "scenario": summary.scenario.value,
            "level": level,
            "marker-color": LEVEL_COLORS[level],
        }))
    return geojson_dumps({"type": "FeatureCollection", "features": features})


def export_layers(inventory, summary: NetworkSummary) -> dict:
    """One GeoJSON document per vehicle type plus the combined layer.

    Returns {layer name: GeoJSON text}; the combined worst-level layer is
    keyed "combined".
    """
    layers = {}
    for vehicle_type in summary.vehicle_types:
        rows = [r for r in summary.rows if r.vehicle_type == vehicle_type]
        layers[vehicle_type] = export_geojson(inventory, rows)
    layers["combined"] = export_worst_level_geojson(inventory, summary)
    return layers
