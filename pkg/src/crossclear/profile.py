"""Longitudinal crossing profiles and IMU-GPS sensor sequences.

A profile is the elevation of the road surface along the approach-hump-
departure path of one grade crossing, sampled at increasing stations.
An IMU-GPS sequence is the 7-channel sensor stream recorded by a survey
vehicle driving the same path: accelerations in X/Y/Z, pitch, roll,
speed, and GPS altitude. Both are immutable after construction and all
operations here are pure.

CSV interchange formats (UTF-8, decimal point '.', lines starting with
'#' ignored):

    profile:  station_m,elevation_m
    IMU-GPS:  time_s,accel_x_mps2,accel_y_mps2,accel_z_mps2,pitch_deg,
              roll_deg,speed_mps,altitude_m
    paired-sample manifest: crossing_id,imu_path,profile_path

Floats are written with their shortest round-trip decimal representation,
so parse -> serialize -> parse is exact.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, StationRangeError

PROFILE_HEADER = ["station_m", "elevation_m"]
IMUGPS_HEADER = [
    "time_s",
    "accel_x_mps2",
    "accel_y_mps2",
    "accel_z_mps2",
    "pitch_deg",
    "roll_deg",
    "speed_mps",
    "altitude_m",
]
MANIFEST_HEADER = ["crossing_id", "imu_path", "profile_path"]

CHANNEL_NAMES = IMUGPS_HEADER[1:]
NUM_CHANNELS = 7
ALTITUDE_CHANNEL = CHANNEL_NAMES.index("altitude_m")
SPEED_CHANNEL = CHANNEL_NAMES.index("speed_mps")

# Walking-profiler sampling resolution; default grid for the hang-up engine.
DEFAULT_SPACING_M = 0.01


def _frozen_array(values, dtype=np.float64, ndim=1) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != ndim:
        raise ValueError(f"expected {ndim}-D array, got shape {arr.shape}")
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Profile:
    """Sampled longitudinal elevation profile of one crossing path.

    stations: positions along the path in meters, strictly increasing.
    elevations: surface elevation in meters at each station.
    """

    stations: np.ndarray
    elevations: np.ndarray
    crossing_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "stations", _frozen_array(self.stations))
        object.__setattr__(self, "elevations", _frozen_array(self.elevations))
        if len(self.stations) != len(self.elevations):
            raise ValueError(
                f"stations ({len(self.stations)}) and elevations "
                f"({len(self.elevations)}) must have equal length"
            )
        if len(self.stations) < 2:
            raise ValueError("a profile needs at least 2 samples")
        if not np.all(np.isfinite(self.stations)) or not np.all(np.isfinite(self.elevations)):
            raise ValueError("profile values must be finite")
        if not np.all(np.diff(self.stations) > 0):
            bad = int(np.flatnonzero(np.diff(self.stations) <= 0)[0]) + 1
            raise ValueError(f"stations must be strictly increasing (violated at index {bad})")

    def __len__(self) -> int:
        return len(self.stations)

    @property
    def start(self) -> float:
        return float(self.stations[0])

    @property
    def end(self) -> float:
        return float(self.stations[-1])

    @property
    def length(self) -> float:
        """Extent of the profile in meters."""
        return self.end - self.start


@dataclass(frozen=True)
class ImuGpsSequence:
    """Time-ordered 7-channel sensor sequence from one crossing traversal.

    channels is a (T, 7) matrix in the fixed column order of
    ``CHANNEL_NAMES``; timestamps are seconds, strictly increasing.
    """

    timestamps: np.ndarray
    channels: np.ndarray
    crossing_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "timestamps", _frozen_array(self.timestamps))
        object.__setattr__(self, "channels", _frozen_array(self.channels, ndim=2))
        if self.channels.shape[1] != NUM_CHANNELS:
            raise ValueError(
                f"expected {NUM_CHANNELS} channels, got {self.channels.shape[1]}"
            )
        if self.channels.shape[0] != len(self.timestamps):
            raise ValueError(
                f"row count {self.channels.shape[0]} does not match "
                f"timestamp count {len(self.timestamps)}"
            )
        if not np.all(np.isfinite(self.timestamps)) or not np.all(np.isfinite(self.channels)):
            raise ValueError("sensor values must be finite")
        if len(self.timestamps) > 1 and not np.all(np.diff(self.timestamps) > 0):
            bad = int(np.flatnonzero(np.diff(self.timestamps) <= 0)[0]) + 1
            raise ValueError(f"timestamps must be strictly increasing (violated at index {bad})")

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True)
class PairedSample:
    """One training pair: a sensor sequence and its index-aligned target.

    The target is the ground-truth elevation at each sensor row, so its
    length must equal the sequence length.
    """

    input: ImuGpsSequence
    target: np.ndarray
    crossing_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "target", _frozen_array(self.target))
        if len(self.target) != len(self.input):
            raise ValueError(
                f"target length {len(self.target)} does not match "
                f"input row count {len(self.input)}"
            )
        if not np.all(np.isfinite(self.target)):
            raise ValueError("target values must be finite")


def elevation_at(profile: Profile, station) -> float | np.ndarray:
    """Linearly interpolated elevation at a station (exact at sample nodes).

    Accepts a scalar or an array of stations; raises StationRangeError for
    any station outside [first station, last station].
    """
    s = np.asarray(station, dtype=np.float64)
    if np.any(s < profile.stations[0]) or np.any(s > profile.stations[-1]):
        raise StationRangeError(
            f"station out of range [{profile.start}, {profile.end}]"
        )
    out = np.interp(s, profile.stations, profile.elevations)
    return float(out) if np.isscalar(station) or s.ndim == 0 else out


def resample(profile: Profile, spacing: float = DEFAULT_SPACING_M) -> Profile:
    """Resample onto a uniform station grid via linear interpolation.

    Output stations are ``start + k*spacing`` up to the last station; the
    last original station is appended when the grid does not land on it
    exactly (within 1e-9 of a spacing).
    """
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    n = int(np.floor(profile.length / spacing + 1e-9))
    stations = profile.stations[0] + np.arange(n + 1) * spacing
    if stations[-1] < profile.stations[-1] - 1e-9 * spacing:
        stations = np.append(stations, profile.stations[-1])
    else:
        stations[-1] = min(stations[-1], profile.stations[-1])
    elevations = np.interp(stations, profile.stations, profile.elevations)
    return Profile(stations, elevations, crossing_id=profile.crossing_id)


def downsample(seq, factor: int):
    """Keep every ``factor``-th element (indices 0, factor, 2*factor, ...).

    Works on any sliceable sequence or array; rows of a 2-D array are
    treated as elements.
    """
    if factor < 1:
        raise ValueError(f"factor must be >= 1, got {factor}")
    return seq[::factor]


def downsample_sample(sample: PairedSample, factor: int) -> PairedSample:
    """Downsample input rows, timestamps, and target together."""
    return PairedSample(
        input=ImuGpsSequence(
            downsample(sample.input.timestamps, factor),
            downsample(sample.input.channels, factor),
            crossing_id=sample.input.crossing_id,
        ),
        target=downsample(sample.target, factor),
        crossing_id=sample.crossing_id,
    )


def stations_from_speed(seq: ImuGpsSequence) -> np.ndarray | None:
    """Distance along the path by trapezoidal integration of the speed
    channel over the timestamps, starting at 0.

    Returns None when the result would not be a usable station axis:
    non-increasing timestamps, negative speeds, or any zero-length step
    (stations must be strictly increasing).
    """
    t = seq.timestamps
    v = seq.channels[:, SPEED_CHANNEL]
    if len(t) < 2 or np.any(np.diff(t) <= 0) or np.any(v < 0):
        return None
    steps = np.diff(t) * (v[1:] + v[:-1]) / 2.0
    if np.any(steps <= 0):
        return None
    return np.concatenate([[0.0], np.cumsum(steps)])


# ---------------------------------------------------------------------------
# CSV ingestion / serialization
# ---------------------------------------------------------------------------

def _read_rows(text: str, expected_header: list[str], source: str | None):
    """Yield (line_number, fields) for data rows; validates the header."""
    lines = text.splitlines()
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = next(csv.reader([raw]))
        fields = [f.strip() for f in fields]
        if not header_seen:
            if fields != expected_header:
                raise ParseError(
                    f"expected header {','.join(expected_header)!r}, got {raw!r}",
                    source=source, row=lineno,
                )
            header_seen = True
            continue
        yield lineno, fields
    if not header_seen:
        raise ParseError("empty file: header row missing", source=source)


def _parse_float(value: str, *, source, row, column) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ParseError(f"non-numeric value {value!r}", source=source, row=row,
                         column=column) from None
    if not np.isfinite(x):
        raise ParseError(f"non-finite value {value!r}", source=source, row=row,
                         column=column)
    return x


def parse_profile_csv(text: str, *, crossing_id: str | None = None,
                      source: str | None = None) -> Profile:
    """Parse profile CSV text into a validated Profile."""
    stations, elevations = [], []
    for lineno, fields in _read_rows(text, PROFILE_HEADER, source):
        if len(fields) != 2:
            raise ParseError(f"expected 2 columns, got {len(fields)}",
                             source=source, row=lineno)
        s = _parse_float(fields[0], source=source, row=lineno, column="station_m")
        z = _parse_float(fields[1], source=source, row=lineno, column="elevation_m")
        if stations and s <= stations[-1]:
            raise ParseError(
                f"station {s} not increasing (previous {stations[-1]})",
                source=source, row=lineno, column="station_m",
            )
        stations.append(s)
        elevations.append(z)
    if len(stations) < 2:
        raise ParseError("a profile needs at least 2 samples", source=source)
    return Profile(stations, elevations, crossing_id=crossing_id)


def write_profile_csv(profile: Profile) -> str:
    """Serialize a Profile; floats use shortest round-trip representation."""
    out = io.StringIO()
    out.write(",".join(PROFILE_HEADER) + "\n")
    for s, z in zip(profile.stations, profile.elevations):
        out.write(f"{float(s)!r},{float(z)!r}\n")
    return out.getvalue()


def parse_imugps_csv(text: str, *, crossing_id: str | None = None,
                     source: str | None = None) -> ImuGpsSequence:
    """Parse IMU-GPS CSV text into a validated ImuGpsSequence."""
    times, rows = [], []
    for lineno, fields in _read_rows(text, IMUGPS_HEADER, source):
        if len(fields) != len(IMUGPS_HEADER):
            raise ParseError(
                f"expected {len(IMUGPS_HEADER)} columns, got {len(fields)}",
                source=source, row=lineno,
            )
        t = _parse_float(fields[0], source=source, row=lineno, column="time_s")
        if times and t <= times[-1]:
            raise ParseError(
                f"time {t} not increasing (previous {times[-1]})",
                source=source, row=lineno, column="time_s",
            )
        row = [
            _parse_float(v, source=source, row=lineno, column=name)
            for name, v in zip(CHANNEL_NAMES, fields[1:])
        ]
        times.append(t)
        rows.append(row)
    if not times:
        raise ParseError("no data rows", source=source)
    return ImuGpsSequence(times, np.array(rows, dtype=np.float64).reshape(len(rows), NUM_CHANNELS),
                          crossing_id=crossing_id)


def write_imugps_csv(seq: ImuGpsSequence) -> str:
    out = io.StringIO()
    out.write(",".join(IMUGPS_HEADER) + "\n")
    for t, row in zip(seq.timestamps, seq.channels):
        out.write(",".join(repr(float(v)) for v in [t, *row]) + "\n")
    return out.getvalue()


def load_profile(path) -> Profile:
    path = Path(path)
    return parse_profile_csv(path.read_text(encoding="utf-8"),
                             crossing_id=path.stem, source=str(path))


def load_imugps(path) -> ImuGpsSequence:
    path = Path(path)
    return parse_imugps_csv(path.read_text(encoding="utf-8"),
                            crossing_id=path.stem, source=str(path))


def target_as_profile_csv(sample: PairedSample) -> str:
    """Serialize a paired-sample target using the profile CSV schema.

    Index-aligned targets carry no stations of their own, so the row index
    is written as the station column.
    """
    out = io.StringIO()
    out.write(",".join(PROFILE_HEADER) + "\n")
    for i, z in enumerate(sample.target):
        out.write(f"{float(i)!r},{float(z)!r}\n")
    return out.getvalue()


def parse_manifest_csv(text: str, *, source: str | None = None) -> list[dict]:
    """Parse a paired-sample manifest into a list of row dicts."""
    entries = []
    for lineno, fields in _read_rows(text, MANIFEST_HEADER, source):
        if len(fields) != 3:
            raise ParseError(f"expected 3 columns, got {len(fields)}",
                             source=source, row=lineno)
        entries.append(dict(zip(MANIFEST_HEADER, fields)))
    return entries


def load_paired_samples(manifest_path) -> list[PairedSample]:
    """Load all paired samples listed in a manifest.

    Paths in the manifest are resolved relative to the manifest location.
    The target file uses the profile CSV schema; its elevations are taken
    index-for-index and must match the sensor row count.
    """
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    samples = []
    for entry in parse_manifest_csv(manifest_path.read_text(encoding="utf-8"),
                                    source=str(manifest_path)):
        imu = load_imugps(base / entry["imu_path"])
        target = load_profile(base / entry["profile_path"])
        samples.append(PairedSample(
            input=ImuGpsSequence(imu.timestamps, imu.channels,
                                 crossing_id=entry["crossing_id"]),
            target=target.elevations,
            crossing_id=entry["crossing_id"],
        ))
    return samples
