// @vitest-environment jsdom
import { describe, expect, it, vi } from "vitest";

import { TicketPayload } from "../src/api.js";
import { DashboardState } from "../src/state.js";
import { actionLabel, latestPerQuantity, render } from "../src/view.js";
import { PENDING_TICKETS, READINGS, SENSORS } from "./fixtures.js";

function makeState(overrides: Partial<DashboardState> = {}): DashboardState {
  return {
    connected: true,
    sensors: structuredClone(SENSORS),
    readings: structuredClone(READINGS),
    tickets: structuredClone(PENDING_TICKETS) as TicketPayload[],
    notice: null,
    deciding: new Set<string>(),
    ...overrides,
  };
}

function mount(state: DashboardState, onDecide = vi.fn()) {
  const root = document.createElement("main");
  document.body.replaceChildren(root);
  render(root, state, { onDecide });
  return { root, onDecide };
}

describe("alert cards", () => {
  it("renders one card per pending ticket (four for the case study)", () => {
    const { root } = mount(makeState());
    const cards = root.querySelectorAll(".ticket-card");
    expect(cards).toHaveLength(4);
    const titles = [...root.querySelectorAll(".ticket-action")].map((el) => el.textContent);
    expect(titles).toContain("Irrigate the field");
    expect(titles).toContain("Activate cooling system");
    expect(titles).toContain("Turn on grow lights");
    expect(titles).toContain("Adjust soil pH with additives");
  });

  it("shows the server's condition, explanation, confidence, and alternatives verbatim", () => {
    const { root } = mount(makeState());
    const irrigate = [...root.querySelectorAll(".ticket-card")].find((card) =>
      card.querySelector(".ticket-action")?.textContent === "Irrigate the field",
    )!;
    const ticket = PENDING_TICKETS.find((t) => t.recommendation.action_id === "irrigate")!;
    expect(irrigate.querySelector(".ticket-condition")?.textContent).toBe(
      ticket.recommendation.condition,
    );
    expect(irrigate.querySelector(".ticket-explanation")?.textContent).toContain(
      "Soil moisture is 23.45%",
    );
    // confidence is the raw server number, never recomputed
    expect(irrigate.querySelector(".ticket-confidence")?.textContent).toContain(
      String(ticket.recommendation.confidence),
    );
    expect(irrigate.querySelector(".ticket-alternatives")?.textContent).toContain(
      "Activate cooling system",
    );
    const evidenceSources = [...irrigate.querySelectorAll(".ticket-evidence li")].map(
      (li) => li.textContent?.split(" ")[0],
    );
    expect(evidenceSources).toContain("rule");
    expect(evidenceSources).toContain("fuzzy");
  });

  it("clicking approve invokes the handler once for that ticket", () => {
    const { root, onDecide } = mount(makeState());
    const card = root.querySelector<HTMLElement>(".ticket-card")!;
    const ticketId = card.dataset.ticketId!;
    const approve = card.querySelector<HTMLButtonElement>(".btn-approve")!;
    approve.click();
    expect(onDecide).toHaveBeenCalledTimes(1);
    expect(onDecide).toHaveBeenCalledWith(ticketId, "approve");
  });

  it("locks buttons while a decision is in flight", () => {
    const first = PENDING_TICKETS[0]!.ticket_id;
    const { root } = mount(makeState({ deciding: new Set([first]) }));
    const busyCard = root.querySelector<HTMLElement>(`[data-ticket-id="${first}"]`)!;
    for (const button of busyCard.querySelectorAll("button")) {
      expect(button.disabled).toBe(true);
    }
    const otherCard = [...root.querySelectorAll<HTMLElement>(".ticket-card")].find(
      (card) => card.dataset.ticketId !== first,
    )!;
    expect(otherCard.querySelector("button")?.disabled).toBe(false);
  });

  it("renders decided tickets with buttons disabled (mirrors the server 409)", () => {
    const tickets = structuredClone(PENDING_TICKETS) as TicketPayload[];
    tickets[0] = {
      ...tickets[0]!,
      status: "approved",
      decided_at: 1755000000000,
      operator_note: "confirmed",
    };
    const { root, onDecide } = mount(makeState({ tickets }));
    const decided = root.querySelector<HTMLElement>('[data-status="approved"]')!;
    const button = decided.querySelector<HTMLButtonElement>(".btn-approve")!;
    expect(button.disabled).toBe(true);
    button.click();
    expect(onDecide).not.toHaveBeenCalled();
    expect(decided.querySelector(".ticket-decision")?.textContent).toContain("approved");
    expect(decided.querySelector(".ticket-decision")?.textContent).toContain("confirmed");
  });

  it("shows the no-alerts state when the gateway is quiet", () => {
    const { root } = mount(makeState({ tickets: [] }));
    expect(root.querySelector(".no-alerts")?.textContent).toBe("No alerts.");
    expect(root.querySelectorAll(".ticket-card")).toHaveLength(0);
  });
});

describe("connection banner", () => {
  it("live link shows the ok banner and enabled buttons", () => {
    const { root } = mount(makeState());
    expect(root.querySelector(".banner-ok")).not.toBeNull();
  });

  it("disconnection shows the stale banner and disables every decision", () => {
    const { root, onDecide } = mount(makeState({ connected: false }));
    expect(root.querySelector(".banner-stale")?.textContent).toContain("stale");
    const buttons = [...root.querySelectorAll<HTMLButtonElement>(".ticket-buttons button")];
    expect(buttons.length).toBeGreaterThan(0);
    for (const button of buttons) {
      expect(button.disabled).toBe(true);
      button.click();
    }
    expect(onDecide).not.toHaveBeenCalled();
  });
});

describe("readings table", () => {
  it("shows the latest value per quantity with unit and meaning", () => {
    const { root } = mount(makeState());
    const rows = root.querySelectorAll(".reading-row");
    expect(rows).toHaveLength(5); // five distinct quantities in the case study
    const soil = root.querySelector<HTMLElement>('[data-quantity="soil_moisture"]')!;
    expect(soil.textContent).toContain("23.45 %");
    expect(soil.textContent).toContain("Soil moisture content");
    expect(soil.textContent).toContain("SOIL7AGR");
  });

  it("latestPerQuantity keeps the newest timestamp per quantity", () => {
    const readings = structuredClone(READINGS);
    const updated = { ...readings[0]!, timestamp: readings[0]!.timestamp + 5000, value: 40.0 };
    readings.push(updated);
    const latest = latestPerQuantity(readings);
    const byQuantity = new Map(latest.map((r) => [r.quantity, r]));
    expect(byQuantity.get(updated.quantity)?.value).toBe(40.0);
  });
});

describe("action labels", () => {
  it("maps every case-study action and passes unknown ids through", () => {
    expect(actionLabel("irrigate")).toBe("Irrigate the field");
    expect(actionLabel("something_new")).toBe("something_new");
  });
});
