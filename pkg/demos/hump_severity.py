"""Sweep one vehicle over a synthetic vertical hump.

A triangular hump is the worst honest test case for the chord model
because the answer is known in closed form: with apex height h, slope
half-base L, wheelbase W and clearance c, the deepest deficit is
c - h*W/(2L) and it happens when the axles straddle the apex
symmetrically. The sweep should land on exactly that.
"""

import numpy as np

from crossclear.hangup import analyze_crossing
from crossclear.profile import Profile
from crossclear.vehicle import Scenario, design_vehicle, load_bundled_stats

HUMP_HEIGHT_M = 0.3
SLOPE_HALF_BASE_M = 6.0
APPROACH_M = 13.0


def main():
    apex = APPROACH_M + SLOPE_HALF_BASE_M
    profile = Profile(
        [0.0, APPROACH_M, apex, apex + SLOPE_HALF_BASE_M, 2 * apex],
        [0.0, 0.0, HUMP_HEIGHT_M, 0.0, 0.0],
    )
    print(f"profile: {profile.length:.1f} m with a {HUMP_HEIGHT_M} m hump at {apex} m")

    stats = load_bundled_stats()
    vehicle = design_vehicle(stats, "low_boy", Scenario.WORST)
    print(f"vehicle: {vehicle.label}, wheelbase {vehicle.wheelbase} m, "
          f"clearance {vehicle.clearance_wheelbase} m")

    result = analyze_crossing(profile, vehicle)
    print(f"\ndelta_min            {result.delta_min:+.5f} m")
    print(f"worst rear axle at   {result.worst_rear_axle_station:.2f} m")
    print(f"interference at      {result.worst_interference_station:.2f} m")
    print(f"level                {result.level}")

    closed_form = vehicle.clearance_wheelbase - \
        HUMP_HEIGHT_M * vehicle.wheelbase / (2 * SLOPE_HALF_BASE_M)
    print(f"\nclosed form says     {closed_form:+.5f} m "
          f"(sweep is off by {abs(result.delta_min - closed_form):.2e})")

    curve = result.clearance_curve
    shallow = curve[curve[:, 1] >= 0]
    print(f"curve: {len(curve)} placements, "
          f"{len(curve) - len(shallow)} of them below grade")

    # the same vehicle clears a hump half as tall
    mild = Profile(profile.stations, np.asarray(profile.elevations) / 2.0)
    print(f"half-height hump: delta_min {analyze_crossing(mild, vehicle).delta_min:+.5f} m, "
          f"level {analyze_crossing(mild, vehicle).level}")


if __name__ == "__main__":
    main()
