/**
 * Entry point: wire the API client, polling store, and renderer together.
 * The gateway base URL comes from the `?api=` query parameter (default
 * http://127.0.0.1:8080).
 */

import { GatewayClient } from "./api.js";
import { DashboardStore, DEFAULT_POLL_MS } from "./state.js";
import { render } from "./view.js";

export function apiBaseUrl(search: string = window.location.search): string {
  const fromQuery = new URLSearchParams(search).get("api");
  return fromQuery ?? "http://127.0.0.1:8080";
}

export function bootstrap(root: HTMLElement, baseUrl: string, pollMs = DEFAULT_POLL_MS): DashboardStore {
  const store = new DashboardStore(new GatewayClient(baseUrl), pollMs);
  store.subscribe((state) =>
    render(root, state, {
      onDecide: (ticketId, decision) => void store.decide(ticketId, decision),
    }),
  );
  store.start();
  return store;
}

const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement) {
  bootstrap(rootElement, apiBaseUrl());
}
