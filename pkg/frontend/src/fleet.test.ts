import { describe, expect, it } from "vitest";
import type { FleetView, HostView, ServerRow } from "./api.js";
import { actionFor, badgeFor, orderedServers, settle } from "./fleet.js";

function row(id: string, observed: ServerRow["observed"], level = 1): ServerRow {
  return { server_id: id, level, observed, device_count: 1 };
}

function host(name: string, state: string, servers: ServerRow[]): HostView {
  return { hostname: name, starter_state: state, servers };
}

describe("badges", () => {
  it("maps observations to badges, pending winning", () => {
    const none = new Set<string>();
    expect(badgeFor(row("A/1", "Running"), none)).toBe("running");
    expect(badgeFor(row("A/1", "Stopped"), none)).toBe("stopped");
    expect(badgeFor(row("A/1", "Crashed"), none)).toBe("crashed");
    expect(badgeFor(row("A/1", "Unknown"), none)).toBe("unknown");
    expect(badgeFor(row("A/1", "Running"), new Set(["A/1"]))).toBe("pending");
  });
});

describe("available actions", () => {
  const up = (r: ServerRow) => host("h", "ON", [r]);
  it("offers the opposite of the observed state", () => {
    expect(actionFor(up(row("A/1", "Running")), row("A/1", "Running"), new Set())).toBe("stop");
    expect(actionFor(up(row("A/1", "Stopped")), row("A/1", "Stopped"), new Set())).toBe("start");
    expect(actionFor(up(row("A/1", "Crashed")), row("A/1", "Crashed"), new Set())).toBe("start");
  });

  it("disables actions while pending and when the supervisor is down", () => {
    expect(
      actionFor(up(row("A/1", "Stopped")), row("A/1", "Stopped"), new Set(["A/1"])),
    ).toBeNull();
    const down = host("h", "UNKNOWN", [row("A/1", "Unknown")]);
    expect(actionFor(down, row("A/1", "Unknown"), new Set())).toBeNull();
  });
});

describe("ordering", () => {
  it("sorts by level then id", () => {
    const h = host("h", "ON", [
      row("B/1", "Running", 2),
      row("C/1", "Running", 1),
      row("A/1", "Running", 2),
    ]);
    expect(orderedServers(h).map((r) => r.server_id)).toEqual(["C/1", "A/1", "B/1"]);
  });
});

describe("pending settlement", () => {
  it("keeps pending while the observation is unchanged, clears on change", () => {
    const issued = new Map([
      ["A/1", "Stopped"],
      ["B/1", "Stopped"],
    ]);
    const view: FleetView = {
      hosts: [host("h", "ON", [row("A/1", "Stopped"), row("B/1", "Running")])],
    };
    const still = settle(view, issued);
    expect(still.has("A/1")).toBe(true); // still stopped: action not visible yet
    expect(still.has("B/1")).toBe(false); // transitioned: settled
  });

  it("settles servers that vanished from the view", () => {
    const still = settle({ hosts: [] }, new Map([["A/1", "Running"]]));
    expect(still.size).toBe(0);
  });
});
