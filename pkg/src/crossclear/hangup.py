"""Geometric hang-up engine.

Models the vehicle underside as a rigid chord: the straight line through
the two axle contact points, offset downward-to-ground by the wheelbase
clearance, with overhang undersides on the extrapolated chord offset by
their own clearances. The signed clearance at a body point is

    delta(o) = chord(o) + clearance(o) - terrain(o)

with o the longitudinal offset from the low-station axle. delta < 0 means
the body would have to pass through the ground: a hang-up.

The sweep places the axle span at every grid station of the resampled
profile (default 0.01 m spacing) and evaluates body points at the same
spacing, so a profile kink that lies on the grid is hit exactly. The
sub-spacing sliver at the very end of a profile whose extent is not a
whole number of steps is not swept. Asymmetric vehicles (any overhang)
are swept in both travel directions and the worse direction wins at each
position.

Classification (thresholds are 4 in and 2 in exactly; boundary values go
to the safer, lower-numbered level):

    level 1: delta >= 0.1016 m
    level 2: 0.0508 m <= delta < 0.1016 m
    level 3: 0 m <= delta < 0.0508 m
    level 4: delta < 0 m
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import VehicleFitError
from .profile import DEFAULT_SPACING_M, Profile
from .vehicle import DimensionStats, Scenario, VehicleGeometry, design_vehicle

LEVEL_1_MIN_M = 0.1016  # 4 inches
LEVEL_2_MIN_M = 0.0508  # 2 inches

RESULTS_CSV_HEADER = [
    "crossing_id",
    "vehicle_type",
    "scenario",
    "delta_min_m",
    "worst_station_m",
    "level",
]

@dataclass(frozen=True)
class HangupResult:
    """Outcome of sweeping one vehicle over one profile.

    delta_min: worst signed clearance over all placements (m).
    worst_rear_axle_station: placement (low-station axle) achieving it;
        first such station when several tie.
    worst_interference_station: body point where that minimum occurs.
    clearance_curve: (N, 2) array of (rear_axle_station, delta) pairs.
    level: 1..4, present once classified.
    """

    delta_min: float
    worst_rear_axle_station: float
    worst_interference_station: float
    clearance_curve: np.ndarray
    level: int | None = None
    vehicle_label: str = ""
    crossing_id: str | None = None

    def __post_init__(self):
        curve = np.asarray(self.clearance_curve, dtype=np.float64)
        if curve.ndim != 2 or curve.shape[1] != 2 or curve.shape[0] < 1:
            raise ValueError(f"clearance_curve must be (N, 2), got {curve.shape}")
        curve = np.ascontiguousarray(curve)
        curve.flags.writeable = False
        object.__setattr__(self, "clearance_curve", curve)
        if self.delta_min != curve[:, 1].min():
            raise ValueError("delta_min must equal the curve minimum")
        if self.level is not None and self.level != classify_level(self.delta_min):
            raise ValueError(
                f"level {self.level} inconsistent with delta_min {self.delta_min}"
            )


def classify_level(delta: float) -> int:
    """Four-tier hang-up risk level for a signed clearance."""
    if not np.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")
    if delta >= LEVEL_1_MIN_M:
        return 1
    if delta >= LEVEL_2_MIN_M:
        return 2
    if delta >= 0.0:
        return 3
    return 4


def _reversed_geometry(vehicle: VehicleGeometry) -> VehicleGeometry:
    # Traveling the other way swaps which overhang leads.
    return replace(vehicle, front_overhang=vehicle.rear_overhang,
                   rear_overhang=vehicle.front_overhang)


def _segments(vehicle: VehicleGeometry):
    """Body segments as (start offset, stop offset, clearance) triples,
    rear to front, offsets measured from the low-station axle."""
    W = vehicle.wheelbase
    segs = []
    if vehicle.rear_overhang:
        segs.append((-vehicle.rear_overhang.length, 0.0, vehicle.rear_overhang.clearance))
    segs.append((0.0, W, vehicle.clearance_wheelbase))
    if vehicle.front_overhang:
        segs.append((W, W + vehicle.front_overhang.length,
                     vehicle.front_overhang.clearance))
    return segs


def _segment_clearances(segs, offsets: np.ndarray) -> np.ndarray:
    """Clearance of the body segment covering each offset.

    Offsets exactly on a segment boundary take the rear-side segment;
    the sweep evaluates boundaries under both clearances anyway.
    """
    stops = np.array([stop for _, stop, _ in segs])
    clears = np.array([clear for _, _, clear in segs])
    j = np.clip(np.searchsorted(stops, offsets, side="left"), 0, len(segs) - 1)
    return clears[j]


def _cells(offsets: np.ndarray, spacing: float):
    """Split offsets into whole grid steps plus a fractional remainder.

    Near-integral ratios snap to the node so float dust in offsets never
    drags in a neighboring grid cell.
    """
    t = np.asarray(offsets, dtype=np.float64) / spacing
    k = np.floor(t).astype(np.int64)
    phi = t - k
    high = phi > 1.0 - 1e-9
    k[high] += 1
    phi[high] = 0.0
    phi[phi < 1e-9] = 0.0
    return k, phi


def _directed_sweep(profile: Profile, stations: np.ndarray, z: np.ndarray,
                    spacing: float, vehicle: VehicleGeometry):
    """Sweep one orientation over the uniform grid of axle positions.

    With the low-station axle fixed, clearance along the body is
    piecewise linear in station, so its minimum sits at a body segment
    endpoint or at a terrain knot under the body span; evaluating both
    candidate sets exactly keeps the grid from biasing delta. Ties go
    to the rear-most body point. Returns (position indices, delta per
    position, interference offset per position).
    """
    n = len(z) - 1
    segs = _segments(vehicle)
    off_min = segs[0][0]
    off_max = segs[-1][1]

    k_lo, p_lo = _cells(np.array([-off_min]), spacing)
    k_hi, p_hi = _cells(np.array([off_max]), spacing)
    i_lo = int(k_lo[0]) + (1 if p_lo[0] > 0 else 0)
    i_hi = n - int(k_hi[0]) - (1 if p_hi[0] > 0 else 0)
    if i_hi < i_lo:
        raise VehicleFitError(
            f"profile extent {n * spacing:.3f} m cannot hold the "
            f"{vehicle.footprint:.3f} m body of {vehicle.label!r}"
        )
    idx = np.arange(i_lo, i_hi + 1)
    pos = stations[idx]

    z_rear = z[idx]
    z_front = np.interp(pos + vehicle.wheelbase, profile.stations, profile.elevations)
    slope = (z_front - z_rear) / vehicle.wheelbase

    best = np.full(idx.shape, np.inf)
    best_off = np.full(idx.shape, np.inf)

    def consider(sel, vals, offs):
        b, bo = best[sel], best_off[sel]
        upd = (vals < b) | ((vals == b) & (offs < bo))
        b[upd] = vals[upd]
        bo[upd] = offs[upd] if isinstance(offs, np.ndarray) else offs
        best[sel], best_off[sel] = b, bo

    all_pos = slice(None)
    for start, stop, clear in segs:
        for u in (start, stop):
            terrain = np.interp(pos + u, profile.stations, profile.elevations)
            consider(all_pos, (z_rear - terrain) + slope * u + clear, u)

    inside = (profile.stations > pos[0] + off_min) & \
             (profile.stations < pos[-1] + off_max)
    for x_k, z_k in zip(profile.stations[inside], profile.elevations[inside]):
        # positions whose open body span contains this knot
        lo = int(np.searchsorted(pos, x_k - off_max, side="right"))
        hi = int(np.searchsorted(pos, x_k - off_min, side="left"))
        if hi <= lo:
            continue
        u = x_k - pos[lo:hi]
        vals = (z_rear[lo:hi] - z_k) + slope[lo:hi] * u + _segment_clearances(segs, u)
        consider(slice(lo, hi), vals, u)

    return idx, best, best_off


def min_clearance(profile: Profile, vehicle: VehicleGeometry,
                  spacing: float = DEFAULT_SPACING_M) -> HangupResult:
    """Worst-case clearance of a vehicle traversing a profile.

    The returned result has no level; ``analyze_crossing`` classifies.
    Ties for the minimum resolve to the lowest station.
    """
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    n = int(np.floor(profile.length / spacing + 1e-9))
    stations = profile.stations[0] + np.arange(n + 1) * spacing
    z = np.interp(stations, profile.stations, profile.elevations)

    orientations = [vehicle]
    if not vehicle.is_symmetric:
        orientations.append(_reversed_geometry(vehicle))

    sweeps = []
    fit_error = None
    for orient in orientations:
        try:
            sweeps.append(_directed_sweep(profile, stations, z, spacing, orient))
        except VehicleFitError as exc:
            fit_error = exc
    if not sweeps:
        raise fit_error

    i_base = min(int(s[0][0]) for s in sweeps)
    i_top = max(int(s[0][-1]) for s in sweeps)
    delta = np.full(i_top - i_base + 1, np.inf)
    interference = np.full(i_top - i_base + 1, np.nan)
    for idx, best, off in sweeps:
        rel = idx - i_base
        upd = best < delta[rel]
        delta[rel[upd]] = best[upd]
        interference[rel[upd]] = stations[idx[upd]] + off[upd]

    valid = np.isfinite(delta)
    delta = delta[valid]
    interference = interference[valid]
    axle_stations = stations[i_base:i_top + 1][valid]

    j = int(np.argmin(delta))
    curve = np.column_stack([axle_stations, delta])
    return HangupResult(
        delta_min=float(delta[j]),
        worst_rear_axle_station=float(axle_stations[j]),
        worst_interference_station=float(interference[j]),
        clearance_curve=curve,
        vehicle_label=vehicle.label,
        crossing_id=profile.crossing_id,
    )


def clearance_at_position(profile: Profile, vehicle: VehicleGeometry,
                          rear_axle_station: float,
                          spacing: float = DEFAULT_SPACING_M):
    """Signed clearance for one placement of the vehicle.

    The low-station axle sits at ``rear_axle_station``; the body is
    evaluated exactly at its segment endpoints and at every terrain
    knot under its span, the same candidates the network sweep checks.
    Returns (delta, interference_station).
    """
    r = float(rear_axle_station)
    segs = _segments(vehicle)
    lo = r + segs[0][0]
    hi = r + segs[-1][1]
    if lo < profile.start - 1e-12 or hi > profile.end + 1e-12:
        raise VehicleFitError(
            f"body span [{lo:.3f}, {hi:.3f}] m exceeds the profile extent "
            f"[{profile.start:.3f}, {profile.end:.3f}] m"
        )
    offsets, clears = [], []
    for start, stop, clear in segs:
        offsets.extend((start, stop))
        clears.extend((clear, clear))
    inside = (profile.stations > lo) & (profile.stations < hi)
    knot_offsets = profile.stations[inside] - r
    offsets = np.concatenate([offsets, knot_offsets])
    clears = np.concatenate([clears, _segment_clearances(segs, knot_offsets)])
    order = np.argsort(offsets, kind="stable")  # ties resolve rear-most
    offsets, clears = offsets[order], clears[order]

    stations = np.clip(r + offsets, profile.start, profile.end)
    terrain = np.interp(stations, profile.stations, profile.elevations)
    z_rear = np.interp(r, profile.stations, profile.elevations)
    z_front = np.interp(r + vehicle.wheelbase, profile.stations, profile.elevations)
    slope = (z_front - z_rear) / vehicle.wheelbase
    val = (z_rear - terrain) + slope * offsets + clears
    j = int(np.argmin(val))
    return float(val[j]), float(stations[j])


def analyze_crossing(profile: Profile, vehicle: VehicleGeometry,
                     spacing: float = DEFAULT_SPACING_M) -> HangupResult:
    """min_clearance plus the level classification."""
    result = min_clearance(profile, vehicle, spacing)
    return replace(result, level=classify_level(result.delta_min))


@dataclass(frozen=True)
class NetworkRow:
    """Flattened per-(crossing, vehicle type) outcome for batch exports."""

    crossing_id: str
    vehicle_type: str
    scenario: Scenario
    delta_min: float
    worst_station: float
    level: int


@dataclass(frozen=True)
class NetworkSummary:
    """Batch hang-up outcome across a crossing inventory.

    level_counts: per vehicle type, how many crossings landed at each
    level (keys 1..4; sums to the number analyzed for that type).
    worst_level_by_crossing: max level across types per crossing.
    errors: (crossing_id, vehicle_type, message) for skipped pairs.
    """

    scenario: Scenario
    vehicle_types: tuple
    rows: tuple
    level_counts: dict
    worst_level_by_crossing: dict
    errors: tuple

    @property
    def worst_level_counts(self) -> dict:
        counts = {1: 0, 2: 0, 3: 0, 4: 0}
        for level in self.worst_level_by_crossing.values():
            counts[level] += 1
        return counts


def analyze_network(crossings, stats: DimensionStats, scenario: Scenario,
                    types, spacing: float = DEFAULT_SPACING_M,
                    jobs: int = 1) -> NetworkSummary:
    """Run every vehicle type over every crossing and tally levels.

    crossings: iterable of (crossing_id, Profile), analyzed in stable
    crossing_id order. A profile too short for some vehicle is recorded
    under errors and excluded from that type's counts; other pairs
    proceed. jobs > 1 spreads the (type, crossing) pairs over that many
    threads; the tallies are merged in a fixed order afterwards, so the
    output does not depend on jobs.
    """
    scenario = Scenario(scenario)
    ordered = sorted(crossings, key=lambda it: it[0])
    if not ordered:
        raise ValueError("no crossings to analyze")
    type_list = list(types)

    pairs = []
    for vehicle_type in type_list:
        vehicle = design_vehicle(stats, vehicle_type, scenario)
        for crossing_id, prof in ordered:
            pairs.append((vehicle_type, vehicle, crossing_id, prof))

    def work(pair):
        _, vehicle, _, prof = pair
        try:
            return analyze_crossing(prof, vehicle, spacing)
        except VehicleFitError as exc:
            return exc

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(work, pairs))
    else:
        outcomes = [work(pair) for pair in pairs]

    rows = []
    errors = []
    level_counts = {t: {1: 0, 2: 0, 3: 0, 4: 0} for t in type_list}
    worst: dict = {}
    for (vehicle_type, _, crossing_id, _), outcome in zip(pairs, outcomes):
        if isinstance(outcome, VehicleFitError):
            errors.append((crossing_id, vehicle_type, str(outcome)))
            continue
        rows.append(NetworkRow(
            crossing_id=crossing_id,
            vehicle_type=vehicle_type,
            scenario=scenario,
            delta_min=outcome.delta_min,
            worst_station=outcome.worst_rear_axle_station,
            level=outcome.level,
        ))
        level_counts[vehicle_type][outcome.level] += 1
        worst[crossing_id] = max(worst.get(crossing_id, 1), outcome.level)

    rows.sort(key=lambda r: (r.crossing_id, r.vehicle_type))
    return NetworkSummary(
        scenario=scenario,
        vehicle_types=tuple(type_list),
        rows=tuple(rows),
        level_counts=level_counts,
        worst_level_by_crossing=dict(sorted(worst.items())),
        errors=tuple(errors),
    )


def results_to_csv(rows) -> str:
    """Batch results CSV; floats fixed at 6 decimal places.

    worst_station_m is the low-station axle placement (the clearance
    curve's arg-min), not the body interference point.
    """
    out = io.StringIO()
    out.write(",".join(RESULTS_CSV_HEADER) + "\n")
    for row in rows:
        out.write(
            f"{row.crossing_id},{row.vehicle_type},{row.scenario.value},"
            f"{row.delta_min:.6f},{row.worst_station:.6f},{row.level}\n"
        )
    return out.getvalue()


def parse_results_csv(text: str, source: str | None = None) -> list:
    """Rows of a results CSV back as NetworkRow objects."""
    from .errors import ParseError
    from .profile import _parse_float, _read_rows

    rows = []
    for lineno, fields in _read_rows(text, RESULTS_CSV_HEADER, source):
        if len(fields) != len(RESULTS_CSV_HEADER):
            raise ParseError(f"expected {len(RESULTS_CSV_HEADER)} fields, "
                             f"got {len(fields)}", source=source, row=lineno)
        try:
            level = int(fields[5])
        except ValueError:
            raise ParseError(f"level must be an integer, got {fields[5]!r}",
                             source=source, row=lineno, column="level") from None
        if level not in (1, 2, 3, 4):
            raise ParseError(f"level must be 1..4, got {fields[5]!r}",
                             source=source, row=lineno, column="level")
        rows.append(NetworkRow(
            crossing_id=fields[0],
            vehicle_type=fields[1],
            scenario=Scenario.parse(fields[2]),
            delta_min=_parse_float(fields[3], source=source, row=lineno,
                                   column="delta_min_m"),
            worst_station=_parse_float(fields[4], source=source, row=lineno,
                                       column="worst_station_m"),
            level=level,
        ))
    return rows


def rows_to_summary(rows) -> NetworkSummary:
    """Rebuild a NetworkSummary from flat rows (e.g. a parsed results CSV).

    All rows must share one scenario. Errors cannot be reconstructed
    from a results file, so the summary carries none.
    """
    rows = sorted(rows, key=lambda r: (r.crossing_id, r.vehicle_type))
    if not rows:
        raise ValueError("no result rows")
    scenarios = {row.scenario for row in rows}
    if len(scenarios) != 1:
        raise ValueError(f"rows mix scenarios: {sorted(s.value for s in scenarios)}")
    type_list = sorted({row.vehicle_type for row in rows})
    level_counts = {t: {1: 0, 2: 0, 3: 0, 4: 0} for t in type_list}
    worst: dict = {}
    for row in rows:
        level_counts[row.vehicle_type][row.level] += 1
        worst[row.crossing_id] = max(worst.get(row.crossing_id, 1), row.level)
    return NetworkSummary(
        scenario=rows[0].scenario,
        vehicle_types=tuple(type_list),
        rows=tuple(rows),
        level_counts=level_counts,
        worst_level_by_crossing=dict(sorted(worst.items())),
        errors=(),
    )


def summary_to_json(summary: NetworkSummary) -> str:
    """Deterministic JSON rendering of a NetworkSummary."""
    doc = {
        "scenario": summary.scenario.value,
        "vehicle_types": list(summary.vehicle_types),
        "crossings_analyzed": len(summary.worst_level_by_crossing),
        "level_counts": {
            t: {str(level): n for level, n in counts.items()}
            for t, counts in summary.level_counts.items()
        },
        "worst_level_by_crossing": summary.worst_level_by_crossing,
        "worst_level_counts": {
            str(level): n for level, n in summary.worst_level_counts.items()
        },
        "errors": [
            {"crossing_id": c, "vehicle_type": t, "message": m}
            for c, t, m in summary.errors
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
