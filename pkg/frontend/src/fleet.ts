/**
 * Fleet panel model: what the server grid shows and which actions are
 * available, derived purely from the gateway's fleet view.
 */
import type { FleetView, HostView, ServerRow } from "./api.js";

export type Badge = "running" | "stopped" | "crashed" | "unknown" | "pending";

export function badgeFor(row: ServerRow, pending: ReadonlySet<string>): Badge {
  if (pending.has(row.server_id)) return "pending";
  switch (row.observed) {
    case "Running":
      return "running";
    case "Stopped":
      return "stopped";
    case "Crashed":
      return "crashed";
    default:
      return "unknown";
  }
}

/** The one action that makes sense for a server right now, if any. */
export function actionFor(
  host: HostView, row: ServerRow, pending: ReadonlySet<string>,
): "start" | "stop" | null {
  if (host.starter_state === "UNKNOWN") return null; // supervisor down
  if (pending.has(row.server_id)) return null;
  if (row.observed === "Running") return "stop";
  if (row.observed === "Stopped" || row.observed === "Crashed") return "start";
  return null;
}

/** Servers of one host in display order: by level, then by id. */
export function orderedServers(host: HostView): ServerRow[] {
  return host.servers
    .slice()
    .sort((a, b) => a.level - b.level || a.server_id.localeCompare(b.server_id));
}

export function orderedHosts(view: FleetView): HostView[] {
  return view.hosts.slice().sort((a, b) => a.hostname.localeCompare(b.hostname));
}

/** A pending action is settled when the new observation differs from the
 * observation recorded when the action was issued; servers that vanished
 * from the view settle too. */
export function settle(
  view: FleetView, issuedObservations: ReadonlyMap<string, string>,
): Set<string> {
  const still = new Set<string>();
  for (const host of view.hosts)
    for (const row of host.servers) {
      const was = issuedObservations.get(row.server_id);
      if (was !== undefined && was === row.observed) still.add(row.server_id);
    }
  return still;
}
