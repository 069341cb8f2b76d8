/** Debounced what-if requests with at most one shot in the air.
 *
 * Slider drags arrive faster than the service should be asked; calls
 * are held for the debounce window and collapsed to the latest, and a
 * newly fired request aborts whatever is still in flight so a stale
 * answer can never land on top of a fresh one.
 *
 * The rendered text is the service's numbers verbatim: this module
 * stringifies, it does not compute.
 */

import type { ApiClient, WhatIfRequest, WhatIfResponse } from "./api.js";

export const DEBOUNCE_MS = 250;

export interface WhatIfView {
  deltaText: string;
  levelText: string;
  response: WhatIfResponse;
}

export class WhatIfController {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inflight: AbortController | null = null;
  private generation = 0;

  constructor(
    private readonly client: Pick<ApiClient, "hangup">,
    private readonly onResult: (view: WhatIfView) => void,
    private readonly onError: (message: string) => void = () => {},
    private readonly debounceMs = DEBOUNCE_MS,
  ) {}

  /** Hold the request for the debounce window; only the latest fires. */
  schedule(request: WhatIfRequest): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(request);
    }, this.debounceMs);
  }

  private async fire(request: WhatIfRequest): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const generation = ++this.generation;
    try {
      const response = await this.client.hangup(request, controller.signal);
      if (generation !== this.generation) return; // superseded mid-flight
      this.onResult({
        deltaText: String(response.delta_min_m),
        levelText: String(response.level),
        response,
      });
    } catch (err) {
      if (controller.signal.aborted || generation !== this.generation) return;
      this.onError(err instanceof Error ? err.message : String(err));
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }
}
