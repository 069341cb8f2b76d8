"""Shared fixtures: the triangular-hump fixture family and a tiny model."""

from __future__ import annotations

import numpy as np
import pytest

from crossclear.geodata import CrossingRecord
from crossclear.neural import ModelConfig
from crossclear.profile import Profile, write_profile_csv
from crossclear.vehicle import load_bundled_stats

# Hump family used across the suite: base from station 3 to 15 (half
# width 6 m), apex at 9, flanked by flat approaches out to 18 m. The
# chord model on the triangle has the closed form
# delta_min = c - h*W/(2L), worst rear axle at apex - W/2.
HUMP_HALF_BASE_M = 6.0
HUMP_APEX_STATION_M = 9.0

# Levels of the three-crossing fixture under low_boy / median
# (W=10.36, c=0.23): flat 0.23 -> 1, h=0.1 0.143667 -> 1,
# h=0.5 -0.201667 -> 4.
EXPECTED_RESULTS_CSV = """\
crossing_id,vehicle_type,scenario,delta_min_m,worst_station_m,level
XING-FLAT,low_boy,median,0.230000,0.000000,1
XING-MILD,low_boy,median,0.143667,3.820000,1
XING-SEVERE,low_boy,median,-0.201667,3.820000,4
"""

FIXTURE_COORDS = {
    "XING-FLAT": (35.10, -89.90),
    "XING-MILD": (35.20, -89.80),
    "XING-SEVERE": (35.30, -89.70),
}


def hump_profile(height: float, crossing_id: str = "hump") -> Profile:
    if height == 0.0:
        return Profile([0.0, 18.0], [0.0, 0.0], crossing_id=crossing_id)
    return Profile(
        [0.0, 3.0, HUMP_APEX_STATION_M, 15.0, 18.0],
        [0.0, 0.0, height, 0.0, 0.0],
        crossing_id=crossing_id,
    )


def hump_delta_min(height: float, wheelbase: float, clearance: float) -> float:
    return clearance - height * wheelbase / (2.0 * HUMP_HALF_BASE_M)


@pytest.fixture(scope="session")
def stats():
    return load_bundled_stats()


@pytest.fixture()
def three_crossings() -> dict:
    return {
        "XING-FLAT": hump_profile(0.0, "XING-FLAT"),
        "XING-MILD": hump_profile(0.1, "XING-MILD"),
        "XING-SEVERE": hump_profile(0.5, "XING-SEVERE"),
    }


@pytest.fixture()
def fixture_inventory(three_crossings) -> list:
    records = []
    for cid in three_crossings:
        lat, lon = FIXTURE_COORDS[cid]
        records.append(CrossingRecord(
            crossing_id=cid, latitude=lat, longitude=lon,
            county="Shelby", city="Memphis", street="Main St", highway="SR-1",
            profile_path=f"{cid}.csv",
        ))
    return records


@pytest.fixture()
def fixture_dir(tmp_path, three_crossings):
    """On-disk copy: profile CSVs plus inventory.csv; returns the directory."""
    lines = ["crossing_id,latitude,longitude,county,city,street,highway,"
             "railroad_division,railroad_subdivision,profile_path"]
    for cid, prof in three_crossings.items():
        (tmp_path / f"{cid}.csv").write_text(write_profile_csv(prof),
                                             encoding="utf-8")
        lat, lon = FIXTURE_COORDS[cid]
        lines.append(f"{cid},{lat},{lon},Shelby,Memphis,Main St,SR-1,,,{cid}.csv")
    (tmp_path / "inventory.csv").write_text("\n".join(lines) + "\n",
                                            encoding="utf-8")
    return tmp_path


@pytest.fixture(scope="session")
def tiny_config() -> ModelConfig:
    return ModelConfig(d_model=8, num_heads=2, num_blocks=1, ff_width=16,
                       lstm_hidden=8)


def random_imu_channels(rng: np.random.Generator, length: int) -> np.ndarray:
    channels = rng.normal(0.0, 1.0, size=(length, 7))
    channels[:, 5] = rng.uniform(15.0, 25.0, size=length)  # plausible speed
    return channels
