/**
 * Polling store: refreshes readings and tickets on an interval, tracks
 * connection health, and funnels every decision through one guarded path
 * (at most one in-flight request per ticket).
 */

import {
  ApiError,
  Decision,
  GatewayClient,
  ReadingPayload,
  SensorPayload,
  TicketPayload,
} from "./api.js";

export interface DashboardState {
  connected: boolean;
  sensors: SensorPayload[];
  readings: ReadingPayload[];
  tickets: TicketPayload[];
  notice: string | null;
  /** Ticket ids with a decision request in flight; their buttons lock. */
  deciding: ReadonlySet<string>;
}

export type DecisionOutcome = "ok" | "conflict" | "in-flight" | "error";

type Listener = (state: DashboardState) => void;

export const DEFAULT_POLL_MS = 2000;

export class DashboardStore {
  private inFlight = new Set<string>();

  readonly state: DashboardState = {
    connected: false,
    sensors: [],
    readings: [],
    tickets: [],
    notice: null,
    deciding: this.inFlight,
  };

  private listeners = new Set<Listener>();
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly client: GatewayClient,
    private readonly pollMs: number = DEFAULT_POLL_MS,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  start(): void {
    if (this.timer !== null) return;
    void this.refresh();
    this.timer = setInterval(() => void this.refresh(), this.pollMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  isDeciding(ticketId: string): boolean {
    return this.inFlight.has(ticketId);
  }

  async refresh(): Promise<void> {
    try {
      const [sensors, readings, tickets] = await Promise.all([
        this.client.sensors(),
        this.client.readings(),
        this.client.tickets(),
      ]);
      this.state.sensors = sensors;
      this.state.readings = readings;
      this.state.tickets = tickets;
      this.state.connected = true;
      this.state.notice = null;
    } catch {
      // Keep the stale data on screen; the banner warns, decisions lock.
      this.state.connected = false;
    }
    this.notify();
  }

  /**
   * Submit approve/override. Repeat submissions while one is in flight are
   * ignored; a server 409 refreshes so the card reflects the decided state.
   */
  async decide(ticketId: string, decision: Decision, note = ""): Promise<DecisionOutcome> {
    if (this.inFlight.has(ticketId)) return "in-flight";
    if (!this.state.connected) return "error";
    this.inFlight.add(ticketId);
    this.notify();
    try {
      const decided = await this.client.decide(ticketId, decision, note);
      this.replaceTicket(decided);
      return "ok";
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        await this.refresh(); // the server's decided state wins
        this.state.notice = `ticket ${ticketId} was already decided`;
        return "conflict";
      }
      this.state.connected = false;
      return "error";
    } finally {
      this.inFlight.delete(ticketId);
      this.notify();
    }
  }

  private replaceTicket(ticket: TicketPayload): void {
    const index = this.state.tickets.findIndex((t) => t.ticket_id === ticket.ticket_id);
    if (index >= 0) {
      this.state.tickets[index] = ticket;
    } else {
      this.state.tickets.push(ticket);
    }
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }
}
