/**
 * DOM rendering. Every number shown comes straight from an API field;
 * the view never merges, ranks, or recomputes confidences.
 */

import { ReadingPayload, RecommendationPayload, TicketPayload } from "./api.js";
import { DashboardState } from "./state.js";

export interface ViewHandlers {
  onDecide: (ticketId: string, decision: "approve" | "override") => void;
}

const ACTION_LABELS: Record<string, string> = {
  irrigate: "Irrigate the field",
  activate_cooling: "Activate cooling system",
  grow_lights_on: "Turn on grow lights",
  adjust_ph: "Adjust soil pH with additives",
};

export function actionLabel(actionId: string): string {
  return ACTION_LABELS[actionId] ?? actionId;
}

export function render(root: HTMLElement, state: DashboardState, handlers: ViewHandlers): void {
  root.replaceChildren(
    banner(state),
    readingsSection(state),
    ticketsSection(state, handlers),
  );
}

function banner(state: DashboardState): HTMLElement {
  const el = div("banner");
  if (!state.connected) {
    el.classList.add("banner-stale");
    el.textContent =
      "Gateway unreachable: showing stale data, decisions disabled until reconnected.";
  } else if (state.notice) {
    el.classList.add("banner-notice");
    el.textContent = state.notice;
  } else {
    el.classList.add("banner-ok");
    el.textContent = "Live";
  }
  return el;
}

function readingsSection(state: DashboardState): HTMLElement {
  const section = el("section", "readings");
  section.append(heading("Latest readings"));
  const latest = latestPerQuantity(state.readings);
  if (latest.length === 0) {
    section.append(div("empty", "No readings yet."));
    return section;
  }
  const table = el("table", "readings-table");
  const head = el("tr");
  for (const column of ["Quantity", "Value", "Meaning", "Sensor", "At"]) {
    head.append(el("th", undefined, column));
  }
  table.append(head);
  for (const reading of latest) {
    const row = el("tr", "reading-row");
    row.dataset.quantity = reading.quantity;
    row.append(
      el("td", undefined, reading.quantity),
      el("td", "reading-value", `${formatValue(reading.value)} ${reading.unit}`),
      el("td", undefined, reading.description),
      el("td", undefined, reading.sensor_id),
      el("td", undefined, new Date(reading.timestamp).toISOString()),
    );
    table.append(row);
  }
  section.append(table);
  return section;
}

export function latestPerQuantity(readings: ReadingPayload[]): ReadingPayload[] {
  const latest = new Map<string, ReadingPayload>();
  for (const reading of readings) {
    const current = latest.get(reading.quantity);
    if (!current || reading.timestamp >= current.timestamp) {
      latest.set(reading.quantity, reading);
    }
  }
  return [...latest.values()].sort((a, b) => a.quantity.localeCompare(b.quantity));
}

function ticketsSection(state: DashboardState, handlers: ViewHandlers): HTMLElement {
  const section = el("section", "tickets");
  section.append(heading("Alerts"));
  const pending = state.tickets.filter((t) => t.status === "pending");
  const decided = state.tickets.filter((t) => t.status !== "pending");
  if (state.tickets.length === 0) {
    section.append(div("empty no-alerts", "No alerts."));
    return section;
  }
  for (const ticket of [...pending, ...decided]) {
    section.append(ticketCard(ticket, state, handlers));
  }
  return section;
}

function ticketCard(
  ticket: TicketPayload,
  state: DashboardState,
  handlers: ViewHandlers,
): HTMLElement {
  const card = div(`ticket-card status-${ticket.status}`);
  card.dataset.ticketId = ticket.ticket_id;
  card.dataset.status = ticket.status;

  const rec = ticket.recommendation;
  card.append(
    el("h3", "ticket-action", actionLabel(rec.action_id)),
    div("ticket-condition", rec.condition),
    div("ticket-explanation", rec.explanation),
    div("ticket-confidence", `confidence ${String(rec.confidence)} (${rec.source})`),
  );

  if (rec.alternatives.length > 0) {
    const alts = div("ticket-alternatives");
    alts.append(el("span", undefined, "alternatives: "));
    alts.append(
      el(
        "span",
        undefined,
        rec.alternatives
          .map(([action, confidence]) => `${actionLabel(action)} (${String(confidence)})`)
          .join(", "),
      ),
    );
    card.append(alts);
  }

  if (ticket.evidence.length > 0) {
    card.append(evidenceList(ticket.evidence));
  }

  const actions = div("ticket-buttons");
  const locked =
    ticket.status !== "pending" || !state.connected || state.deciding.has(ticket.ticket_id);
  for (const decision of ["approve", "override"] as const) {
    const button = el("button", `btn btn-${decision}`) as HTMLButtonElement;
    button.textContent = decision;
    button.dataset.decision = decision;
    button.disabled = locked;
    button.addEventListener("click", () => handlers.onDecide(ticket.ticket_id, decision));
    actions.append(button);
  }
  card.append(actions);

  if (ticket.status !== "pending") {
    const decidedAt = ticket.decided_at === null ? "" : new Date(ticket.decided_at).toISOString();
    card.append(div("ticket-decision", `${ticket.status} ${decidedAt} ${ticket.operator_note}`.trim()));
  }
  return card;
}

function evidenceList(evidence: RecommendationPayload[]): HTMLElement {
  const wrap = div("ticket-evidence");
  wrap.append(el("span", undefined, "evidence:"));
  const list = el("ul");
  for (const entry of evidence) {
    list.append(
      el("li", `evidence-${entry.source}`, `${entry.source} (${String(entry.confidence)}): ${entry.explanation}`),
    );
  }
  wrap.append(list);
  return wrap;
}

function formatValue(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

function heading(text: string): HTMLElement {
  return el("h2", undefined, text);
}

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function div(className: string, text?: string): HTMLElement {
  return el("div", className, text);
}
