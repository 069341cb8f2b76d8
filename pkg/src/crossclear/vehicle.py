"""Design-vehicle dimensions: records, percentile statistics, scenarios.

The hang-up engine consumes a VehicleGeometry: a wheelbase with a ground
clearance measured under it, plus optional front/rear overhangs each with
their own length and clearance. Geometries are built from per-type
dimension statistics under one of three selection scenarios:

    median  -> wheelbase p50, clearance p50
    p75-25  -> wheelbase p75, clearance p25
    worst   -> wheelbase max, clearance min

A field-measurement summary for 12 low-ground-clearance vehicle types is
bundled (see ``load_bundled_stats``); users with their own raw
measurements can aggregate them with ``summarize_dimensions``.

All lengths are meters internally. Raw CSV ingestion accepts a per-row
``units`` column (m | ft | in) converted at parse time.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType

import numpy as np

from .errors import ParseError

FT_TO_M = 0.3048
IN_TO_M = 0.0254

RAW_CSV_HEADER = [
    "vehicle_type",
    "wheelbase",
    "clearance_wheelbase",
    "front_overhang_length",
    "clearance_front",
    "rear_overhang_length",
    "clearance_rear",
    "units",
]

STATS_CSV_HEADER = [
    "vehicle_type",
    "count",
    "wheelbase_p50_m",
    "wheelbase_p75_m",
    "wheelbase_max_m",
    "clearance_min_m",
    "clearance_p25_m",
    "clearance_p50_m",
    "front_overhang_length_m",
    "front_overhang_clearance_m",
    "rear_overhang_length_m",
    "rear_overhang_clearance_m",
]


class Scenario(str, Enum):
    """Vehicle-dimension selection policy for design analyses."""

    MEDIAN = "median"
    P75_25 = "p75-25"
    WORST = "worst"

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scenario {text!r}; expected one of: {names}") from None


# Canonical slug -> display label for the 12 bundled vehicle classes.
VEHICLE_LABELS = {
    "belly_dump": "Belly Dump",
    "drop_deck": "Drop Deck",
    "firetruck": "Firetruck",
    "flatbed": "Flatbed",
    "low_boy": "Low Boy",
    "recreational_vehicle": "Recreational Vehicle",
    "rear_dump": "Rear Dump",
    "school_bus": "School Bus",
    "tanker": "Tanker",
    "class_9_box_trailer": "Class 9 box trailer",
    "car_truck_with_trailer": "Car/truck with trailer",
    "class_5_truck": "Class 5 Truck",
}


def vehicle_slug(name: str) -> str:
    """Normalize a type name (slug or display label) to its slug."""
    key = name.strip()
    if key in VEHICLE_LABELS:
        return key
    lowered = key.lower()
    for slug, label in VEHICLE_LABELS.items():
        if lowered == label.lower() or lowered == slug:
            return slug
    # Unlisted types pass through slugified so user CSVs are not limited
    # to the bundled classes.
    slug = "".join(c if c.isalnum() else "_" for c in lowered).strip("_")
    while "__" in slug:
        slug = slug.replace("__", "_")
    if not slug:
        raise ValueError(f"blank vehicle type {name!r}")
    return slug


def display_label(vehicle_type: str) -> str:
    return VEHICLE_LABELS.get(vehicle_type, vehicle_type)


@dataclass(frozen=True)
class DimensionRecord:
    """One measured vehicle, lengths in meters."""

    vehicle_type: str
    wheelbase: float
    clearance_wheelbase: float
    front_overhang_length: float | None = None
    clearance_front: float | None = None
    rear_overhang_length: float | None = None
    clearance_rear: float | None = None

    def __post_init__(self):
        for name in ("wheelbase", "clearance_wheelbase", "front_overhang_length",
                     "clearance_front", "rear_overhang_length", "clearance_rear"):
            v = getattr(self, name)
            if v is not None and not (v > 0):
                raise ValueError(f"{name} must be > 0, got {v}")


@dataclass(frozen=True)
class Overhang:
    """Body extent beyond an axle and the clearance measured under it."""

    length: float
    clearance: float

    def __post_init__(self):
        if not (self.length > 0):
            raise ValueError(f"overhang length must be > 0, got {self.length}")
        if not (self.clearance > 0):
            raise ValueError(f"overhang clearance must be > 0, got {self.clearance}")


@dataclass(frozen=True)
class VehicleGeometry:
    """Rigid underside model consumed by the hang-up engine."""

    wheelbase: float
    clearance_wheelbase: float
    front_overhang: Overhang | None = None
    rear_overhang: Overhang | None = None
    label: str = "custom"

    def __post_init__(self):
        if not (self.wheelbase > 0):
            raise ValueError(f"wheelbase must be > 0, got {self.wheelbase}")
        if not (self.clearance_wheelbase > 0):
            raise ValueError(
                f"clearance_wheelbase must be > 0, got {self.clearance_wheelbase}"
            )

    @property
    def footprint(self) -> float:
        """Total body length from rear end to front end."""
        front = self.front_overhang.length if self.front_overhang else 0.0
        rear = self.rear_overhang.length if self.rear_overhang else 0.0
        return rear + self.wheelbase + front

    @property
    def is_symmetric(self) -> bool:
        """True when traversal direction cannot change any clearance."""
        return self.front_overhang is None and self.rear_overhang is None


@dataclass(frozen=True)
class TypeStats:
    """Aggregate dimensions for one vehicle type (meters)."""

    vehicle_type: str
    count: int
    wheelbase_p50: float
    wheelbase_p75: float
    wheelbase_max: float
    clearance_min: float
    clearance_p25: float
    clearance_p50: float
    # Overhang statistics are recorded when the source data has them:
    # length as the mean of measured lengths, clearance as the minimum.
    front_overhang_length: float | None = None
    front_overhang_clearance: float | None = None
    rear_overhang_length: float | None = None
    rear_overhang_clearance: float | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not (self.wheelbase_p50 <= self.wheelbase_p75 <= self.wheelbase_max):
            raise ValueError(
                f"{self.vehicle_type}: wheelbase stats must be ordered "
                f"p50 <= p75 <= max"
            )
        if not (self.clearance_min <= self.clearance_p25 <= self.clearance_p50):
            raise ValueError(
                f"{self.vehicle_type}: clearance stats must be ordered "
                f"min <= p25 <= p50"
            )


@dataclass(frozen=True)
class DimensionStats:
    """Per-type statistics keyed by vehicle-type slug (ordered)."""

    by_type: MappingProxyType

    def __post_init__(self):
        object.__setattr__(self, "by_type", MappingProxyType(dict(self.by_type)))

    @property
    def types(self) -> list[str]:
        return list(self.by_type)

    def for_type(self, vehicle_type: str) -> TypeStats:
        slug = vehicle_slug(vehicle_type)
        try:
            return self.by_type[slug]
        except KeyError:
            known = ", ".join(self.by_type)
            raise KeyError(
                f"unknown vehicle type {vehicle_type!r}; known: {known}"
            ) from None


def percentile(values, p: float) -> float:
    """Linear-interpolation percentile on (n-1) ranks.

    Sort ascending, take rank r = p/100 * (n-1), interpolate between the
    bracketing order statistics. p=0 gives the minimum, p=100 the maximum.
    """
    vals = sorted(float(v) for v in values)
    if not vals:
        raise ValueError("percentile of empty sequence")
    if not (0 <= p <= 100):
        raise ValueError(f"p must be in [0, 100], got {p}")
    r = p / 100.0 * (len(vals) - 1)
    lo = int(np.floor(r))
    hi = int(np.ceil(r))
    if lo == hi:
        return vals[lo]
    return vals[lo] + (r - lo) * (vals[hi] - vals[lo])


def summarize_dimensions(records) -> DimensionStats:
    """Aggregate raw measurement records into per-type statistics.

    Overhang stats are attached when at least one record of the type
    carries the corresponding value: length as the mean, clearance as the
    minimum (the conservative choice for a safety screen).
    """
    groups: dict[str, list[DimensionRecord]] = {}
    for rec in records:
        groups.setdefault(vehicle_slug(rec.vehicle_type), []).append(rec)
    if not groups:
        raise ValueError("no records to summarize")

    def _opt(values, reducer):
        present = [v for v in values if v is not None]
        return reducer(present) if present else None

    stats = {}
    for slug, group in sorted(groups.items()):
        wb = [r.wheelbase for r in group]
        cw = [r.clearance_wheelbase for r in group]
        stats[slug] = TypeStats(
            vehicle_type=slug,
            count=len(group),
            wheelbase_p50=percentile(wb, 50),
            wheelbase_p75=percentile(wb, 75),
            wheelbase_max=percentile(wb, 100),
            clearance_min=percentile(cw, 0),
            clearance_p25=percentile(cw, 25),
            clearance_p50=percentile(cw, 50),
            front_overhang_length=_opt([r.front_overhang_length for r in group],
                                       lambda v: sum(v) / len(v)),
            front_overhang_clearance=_opt([r.clearance_front for r in group], min),
            rear_overhang_length=_opt([r.rear_overhang_length for r in group],
                                      lambda v: sum(v) / len(v)),
            rear_overhang_clearance=_opt([r.clearance_rear for r in group], min),
        )
    return DimensionStats(stats)


def design_vehicle(stats: DimensionStats, vehicle_type: str,
                   scenario: Scenario) -> VehicleGeometry:
    """Build the design vehicle for one type under a selection scenario.

    Overhangs are attached only when the stats carry both a length and a
    clearance for that end; a length alone cannot be checked by the
    engine and is deliberately dropped.
    """
    ts = stats.for_type(vehicle_type)
    scenario = Scenario(scenario)
    if scenario is Scenario.MEDIAN:
        wheelbase, clearance = ts.wheelbase_p50, ts.clearance_p50
    elif scenario is Scenario.P75_25:
        wheelbase, clearance = ts.wheelbase_p75, ts.clearance_p25
    else:
        wheelbase, clearance = ts.wheelbase_max, ts.clearance_min

    def _overhang(length, clearance):
        if length is None or clearance is None:
            return None
        return Overhang(length, clearance)

    return VehicleGeometry(
        wheelbase=wheelbase,
        clearance_wheelbase=clearance,
        front_overhang=_overhang(ts.front_overhang_length,
                                 ts.front_overhang_clearance),
        rear_overhang=_overhang(ts.rear_overhang_length,
                                ts.rear_overhang_clearance),
        label=f"{display_label(ts.vehicle_type)} ({scenario.value})",
    )


# Bundled field-measurement summary: 12 vehicle types.
# Columns: count, wheelbase p50/p75/max, clearance min/p25/p50 (meters).
_BUNDLED_ROWS = [
    ("belly_dump",             24, 10.06, 10.29, 11.13, 0.23, 0.25, 0.32),
    ("drop_deck",              28,  9.75, 10.36, 11.28, 0.25, 0.30, 0.41),
    ("firetruck",               8,  5.41,  5.54,  5.97, 0.27, 0.32, 0.34),
    ("flatbed",                53, 10.97, 10.97, 11.89, 0.25, 0.38, 0.43),
    ("low_boy",                10, 10.36, 10.78, 11.89, 0.18, 0.21, 0.23),
    ("recreational_vehicle",   50,  5.89,  6.79,  7.87, 0.15, 0.23, 0.30),
    ("rear_dump",              27,  8.53,  8.84,  9.45, 0.36, 0.41, 0.46),
    ("school_bus",             46,  7.01,  7.01,  7.16, 0.15, 0.23, 0.23),
    ("tanker",                 22,  9.30, 10.61, 11.58, 0.28, 0.37, 0.41),
    ("class_9_box_trailer",    43, 10.97, 11.58, 12.50, 0.20, 0.32, 0.38),
    ("car_truck_with_trailer", 23,  6.05,  8.27, 11.63, 0.25, 0.28, 0.30),
    ("class_5_truck",           4,  6.91,  7.01,  7.32, 0.33, 0.37, 0.38),
]

# Front overhang lengths observed only for these two classes (mean, m).
# The matching clearances were not measured, so the overhangs carry no
# clearance and design_vehicle leaves them off the geometry.
_BUNDLED_FRONT_OVERHANG = {"firetruck": 2.25, "school_bus": 2.25}


def load_bundled_stats() -> DimensionStats:
    """Return the bundled dimension summary (validated on construction)."""
    stats = {}
    for slug, n, wb50, wb75, wbmax, cmin, c25, c50 in _BUNDLED_ROWS:
        stats[slug] = TypeStats(
            vehicle_type=slug,
            count=n,
            wheelbase_p50=wb50,
            wheelbase_p75=wb75,
            wheelbase_max=wbmax,
            clearance_min=cmin,
            clearance_p25=c25,
            clearance_p50=c50,
            front_overhang_length=_BUNDLED_FRONT_OVERHANG.get(slug),
        )
    return DimensionStats(stats)


# ---------------------------------------------------------------------------
# CSV ingestion / export
# ---------------------------------------------------------------------------

_UNIT_FACTORS = {"m": 1.0, "ft": FT_TO_M, "in": IN_TO_M}


def parse_dimension_csv(text: str, *, source: str | None = None) -> list[DimensionRecord]:
    """Parse raw measurement rows; optional cells may be left empty."""
    records = []
    lines = text.splitlines()
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([raw]))]
        if not header_seen:
            if fields != RAW_CSV_HEADER:
                raise ParseError(
                    f"expected header {','.join(RAW_CSV_HEADER)!r}",
                    source=source, row=lineno,
                )
            header_seen = True
            continue
        if len(fields) != len(RAW_CSV_HEADER):
            raise ParseError(
                f"expected {len(RAW_CSV_HEADER)} columns, got {len(fields)}",
                source=source, row=lineno,
            )
        row = dict(zip(RAW_CSV_HEADER, fields))
        unit = row["units"].lower()
        if unit not in _UNIT_FACTORS:
            raise ParseError(f"unknown units {row['units']!r} (expected m, ft, or in)",
                             source=source, row=lineno, column="units")
        k = _UNIT_FACTORS[unit]

        def _num(column, *, required, _row=row, _lineno=lineno, _k=k):
            cell = _row[column]
            if cell == "":
                if required:
                    raise ParseError("missing required value", source=source,
                                     row=_lineno, column=column)
                return None
            try:
                return float(cell) * _k
            except ValueError:
                raise ParseError(f"non-numeric value {cell!r}", source=source,
                                 row=_lineno, column=column) from None

        try:
            records.append(DimensionRecord(
                vehicle_type=vehicle_slug(row["vehicle_type"]),
                wheelbase=_num("wheelbase", required=True),
                clearance_wheelbase=_num("clearance_wheelbase", required=True),
                front_overhang_length=_num("front_overhang_length", required=False),
                clearance_front=_num("clearance_front", required=False),
                rear_overhang_length=_num("rear_overhang_length", required=False),
                clearance_rear=_num("clearance_rear", required=False),
            ))
        except ValueError as exc:
            raise ParseError(str(exc), source=source, row=lineno) from None
    if not header_seen:
        raise ParseError("empty file: header row missing", source=source)
    return records


def stats_to_csv(stats: DimensionStats) -> str:
    """Export per-type statistics for inspection; blank = not measured."""
    out = io.StringIO()
    out.write(",".join(STATS_CSV_HEADER) + "\n")
    for slug in stats.types:
        ts = stats.by_type[slug]
        cells = [
            slug, str(ts.count),
            *(f"{v:g}" for v in (ts.wheelbase_p50, ts.wheelbase_p75, ts.wheelbase_max,
                                 ts.clearance_min, ts.clearance_p25, ts.clearance_p50)),
            *("" if v is None else f"{v:g}"
              for v in (ts.front_overhang_length, ts.front_overhang_clearance,
                        ts.rear_overhang_length, ts.rear_overhang_clearance)),
        ]
        out.write(",".join(cells) + "\n")
    return out.getvalue()
