"""Screen a small crossing inventory and export a risk map.

Builds three synthetic crossings (flat, mild hump, severe hump), runs
two vehicle types over them under the worst-case scenario, and writes
the per-type and combined GeoJSON layers that a map viewer can style
straight from the marker-color property.
"""

import json
from pathlib import Path

from crossclear.geodata import CrossingRecord, export_layers
from crossclear.hangup import analyze_network, results_to_csv
from crossclear.profile import Profile
from crossclear.vehicle import Scenario, load_bundled_stats

OUT_DIR = Path(__file__).parent / "output"


def hump(height: float) -> Profile:
    if height == 0.0:
        return Profile([0.0, 18.0], [0.0, 0.0])
    return Profile([0.0, 3.0, 9.0, 15.0, 18.0], [0.0, 0.0, height, 0.0, 0.0])


def main():
    profiles = {
        "XING-FLAT": hump(0.0),
        "XING-MILD": hump(0.1),
        "XING-SEVERE": hump(0.5),
    }
    inventory = [
        CrossingRecord("XING-FLAT", 35.10, -89.90, county="Shelby"),
        CrossingRecord("XING-MILD", 35.20, -89.80, county="Shelby"),
        CrossingRecord("XING-SEVERE", 35.30, -89.70, county="Tipton"),
    ]

    stats = load_bundled_stats()
    summary = analyze_network(profiles.items(), stats, Scenario.WORST,
                              ["low_boy", "school_bus"], jobs=2)

    print(results_to_csv(summary.rows))
    print("worst level per crossing:")
    for crossing_id, level in sorted(summary.worst_level_by_crossing.items()):
        print(f"  {crossing_id:12s} level {level}")

    OUT_DIR.mkdir(exist_ok=True)
    for name, text in export_layers(inventory, summary).items():
        path = OUT_DIR / f"{name}.geojson"
        path.write_text(text, encoding="utf-8")
        doc = json.loads(text)
        print(f"wrote {path} ({len(doc['features'])} features)")


if __name__ == "__main__":
    main()
