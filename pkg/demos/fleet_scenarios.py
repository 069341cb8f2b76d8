"""Rank the bundled vehicle fleet on one crossing, scenario by scenario.

The same hump can be harmless for a school bus and a trap for a low boy;
this walks every bundled type through the three design scenarios and
prints the resulting league table.
"""

from crossclear.hangup import analyze_crossing
from crossclear.profile import Profile
from crossclear.vehicle import Scenario, design_vehicle, display_label, load_bundled_stats

HUMP = Profile([0.0, 13.0, 19.0, 25.0, 38.0], [0.0, 0.0, 0.2, 0.0, 0.0])


def main():
    stats = load_bundled_stats()
    print(f"{len(stats.types)} bundled vehicle types, "
          f"{sum(stats.for_type(t).count for t in stats.types)} measured vehicles\n")

    for scenario in Scenario:
        rows = []
        for slug in stats.types:
            vehicle = design_vehicle(stats, slug, scenario)
            result = analyze_crossing(HUMP, vehicle)
            rows.append((result.delta_min, slug, result.level))
        rows.sort()

        print(f"scenario {scenario.value!r}, worst first:")
        for delta, slug, level in rows[:4]:
            print(f"  level {level}  {delta:+.4f} m  {display_label(slug)}")
        clear = sum(1 for _, _, level in rows if level == 1)
        print(f"  ... {clear} of {len(rows)} types at level 1\n")


if __name__ == "__main__":
    main()
