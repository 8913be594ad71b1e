/** Transport to the summarize service. */

import type { SummarizeFn } from "./state.js";

/**
 * Base URL for the service API; defaults to same-origin. Deployments on
 * another origin set `window.__API_BASE__` before loading the app.
 */
export function apiBase(): string {
  const injected = (globalThis as { __API_BASE__?: unknown }).__API_BASE__;
  return typeof injected === "string" ? injected.replace(/\/$/, "") : "";
}

export function httpSummarize(base: string = apiBase()): SummarizeFn {
  return async ({ context, query }) => {
    const response = await fetch(`${base}/api/summarize`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ context, query }),
    });
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    return { status: response.status, body };
  };
}
