/**
 * Typed client for the farmgate gateway HTTP API.
 *
 * The payload interfaces mirror the server's JSON exactly; the dashboard
 * never recomputes any of these numbers, it only displays them.
 */

export interface RecommendationPayload {
  action_id: string;
  condition: string;
  explanation: string;
  confidence: number;
  source: string;
  alternatives: [string, number][];
}

export type TicketStatus = "pending" | "approved" | "overridden" | "expired";

export interface TicketPayload {
  ticket_id: string;
  status: TicketStatus;
  created_at: number;
  decided_at: number | null;
  operator_note: string;
  recommendation: RecommendationPayload;
  evidence: RecommendationPayload[];
}

export interface ReadingPayload {
  sensor_id: string;
  quantity: string;
  value: number;
  unit: string;
  timestamp: number;
  lat: number;
  lon: number;
  description: string;
  keywords: string[];
  confidence: number;
}

export interface SensorPayload {
  id: string;
  kind: string;
  quantity: string;
  unit: string;
  meaning: string;
  lat: number;
  lon: number;
  period_ms: number;
  noise_sd: number;
}

export interface HealthPayload {
  status: string;
  uptime_ms: number;
}

export type Decision = "approve" | "override";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
    message?: string,
  ) {
    super(message ?? `gateway responded ${status}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class GatewayClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  health(): Promise<HealthPayload> {
    return this.getJson<HealthPayload>("/api/health");
  }

  sensors(): Promise<SensorPayload[]> {
    return this.getJson<SensorPayload[]>("/api/sensors");
  }

  readings(since?: number, quantity?: string): Promise<ReadingPayload[]> {
    const params = new URLSearchParams();
    if (since !== undefined) params.set("since", String(since));
    if (quantity !== undefined) params.set("quantity", quantity);
    const query = params.toString();
    return this.getJson<ReadingPayload[]>(`/api/readings${query ? `?${query}` : ""}`);
  }

  tickets(status?: TicketStatus): Promise<TicketPayload[]> {
    const query = status ? `?status=${status}` : "";
    return this.getJson<TicketPayload[]>(`/api/recommendations${query}`);
  }

  /** POST the operator's decision; a repeat decision rejects with ApiError(409). */
  async decide(ticketId: string, decision: Decision, note = ""): Promise<TicketPayload> {
    const response = await this.fetchFn(`${this.baseUrl}/api/actions/${ticketId}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ decision, note }),
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as TicketPayload;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as T;
  }
}
