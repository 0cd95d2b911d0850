/**
 * Execution log: every command run is appended with its request, outcome
 * and duration, and survives device switches within the session.
 */
import type { JsonValue } from "./values.js";
import { formatValue } from "./values.js";

export interface LogEntry {
  at: Date;
  device: string;
  command: string;
  request: JsonValue | null;
  outcome: { ok: true; value: JsonValue } | { ok: false; error: string };
  durationMs: number;
}

export function describeEntry(entry: LogEntry): string {
  const arg = entry.request ? `(${formatValue(entry.request)})` : "()";
  const result = entry.outcome.ok
    ? formatValue(entry.outcome.value)
    : `ERROR ${entry.outcome.error}`;
  return `${entry.device} ${entry.command}${arg} -> ${result} [${entry.durationMs.toFixed(0)} ms]`;
}

export function appendLog(log: LogEntry[], entry: LogEntry, cap = 200): LogEntry[] {
  const next = [...log, entry];
  return next.length > cap ? next.slice(next.length - cap) : next;
}
