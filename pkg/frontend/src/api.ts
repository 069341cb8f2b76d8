/** Typed client for the clearance service; the base URL is the only config.
 *
 * Every number displayed in the UI comes out of these responses. The
 * client never derives clearances itself: what the server said is what
 * the user sees.
 */

export interface CrossingItem {
  crossing_id: string;
  latitude: number;
  longitude: number;
  county: string | null;
  city: string | null;
  street: string | null;
  highway: string | null;
  has_profile: boolean;
  worst_level: number | null;
}

export interface ProfileDoc {
  crossing_id: string;
  stations_m: number[];
  elevations_m: number[];
}

export interface OverhangDoc {
  length_m: number | null;
  clearance_m: number | null;
}

export interface VehicleTypeDoc {
  slug: string;
  label: string;
  count: number;
  wheelbase_m: { p50: number; p75: number; max: number };
  clearance_m: { min: number; p25: number; p50: number };
  front_overhang: OverhangDoc | null;
  rear_overhang: OverhangDoc | null;
}

export interface VehiclesDoc {
  scenarios: string[];
  vehicle_types: VehicleTypeDoc[];
}

export interface VehicleSpec {
  wheelbase_m: number;
  clearance_wheelbase_m: number;
  label?: string;
}

export interface WhatIfRequest {
  crossing_id?: string;
  profile_points?: [number, number][];
  vehicle_type?: string;
  scenario?: string;
  vehicle?: VehicleSpec;
}

export interface VehicleEcho {
  label: string;
  wheelbase_m: number;
  clearance_wheelbase_m: number;
}

export interface WhatIfResponse {
  delta_min_m: number;
  level: number;
  worst_rear_axle_station_m: number;
  worst_interference_station_m: number;
  clearance_curve: [number, number][];
  vehicle: VehicleEcho;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    return this.unwrap<T>(response);
  }

  private async unwrap<T>(response: Response): Promise<T> {
    if (!response.ok) {
      let detail = `request failed with status ${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status message
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  crossings(scenario: string): Promise<{ scenario: string; items: CrossingItem[] }> {
    return this.get(`/api/crossings?scenario=${encodeURIComponent(scenario)}`);
  }

  profile(crossingId: string): Promise<ProfileDoc> {
    return this.get(`/api/crossings/${encodeURIComponent(crossingId)}/profile`);
  }

  vehicles(): Promise<VehiclesDoc> {
    return this.get("/api/vehicles");
  }

  async hangup(request: WhatIfRequest, signal?: AbortSignal): Promise<WhatIfResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/api/hangup`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
      signal,
    });
    return this.unwrap<WhatIfResponse>(response);
  }
}
