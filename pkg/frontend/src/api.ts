/**
 * Typed client for the gateway's /api/v1 JSON routes.  Every failure —
 * network, HTTP status, device error body — becomes an ApiError whose
 * message is fit for direct display; the console never swallows one.
 */
import type { DeviceStateName, JsonValue, TypeTag } from "./values.js";

export interface CommandInfo {
  name: string;
  in_type: TypeTag;
  out_type: TypeTag;
  description: string;
  allowed_states: string[];
}

export interface AttributeConfig {
  name: string;
  writable: "Read" | "Write" | "ReadWrite";
  element_type: "DevShort" | "DevLong" | "DevDouble" | "DevString";
  format: "Scalar" | "Spectrum" | "Image";
  max_dim_x: number;
  max_dim_y: number;
  description: string;
  unit: string;
}

export interface AttributeReading {
  name: string;
  element_type: string;
  value: unknown;
  dim_x: number;
  dim_y: number;
  timestamp: number;
  source: "Hardware" | "Cache";
}

export interface ServerRow {
  server_id: string;
  level: number;
  observed: "Running" | "Stopped" | "Crashed" | "Unknown";
  device_count: number;
}

export interface HostView {
  hostname: string;
  starter_state: string;
  servers: ServerRow[];
}

export interface FleetView {
  hosts: HostView[];
}

interface ErrorBody {
  errors?: { reason: string; description: string }[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly reasons: string[],
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(path, init);
  } catch (exc) {
    throw new ApiError(0, ["NETWORK"], `gateway unreachable: ${String(exc)}`);
  }
  if (response.status === 204) return undefined as T;
  if (response.ok) return (await response.json()) as T;
  let body: ErrorBody = {};
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    /* non-JSON error body: fall through to a status-only message */
  }
  const errors = body.errors ?? [];
  const reasons = errors.map((e) => e.reason);
  const message = errors.length
    ? errors.map((e) => `${e.reason}: ${e.description}`).join("; ")
    : `HTTP ${response.status}`;
  throw new ApiError(response.status, reasons, message);
}

export const api = {
  browse: (pattern = "*/*/*") =>
    request<string[]>(`/api/v1/db/browse?pattern=${encodeURIComponent(pattern)}`),

  commands: (device: string) =>
    request<CommandInfo[]>(`/api/v1/devices/${device}/commands`),

  runCommand: (device: string, command: string, argin: JsonValue | null) =>
    request<JsonValue>(`/api/v1/devices/${device}/commands/${command}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(argin),
    }),

  attributes: (device: string) =>
    request<AttributeConfig[]>(`/api/v1/devices/${device}/attributes`),

  readAttribute: (device: string, name: string) =>
    request<AttributeReading>(`/api/v1/devices/${device}/attributes/${name}`),

  writeAttribute: (device: string, name: string, value: unknown) =>
    request<void>(`/api/v1/devices/${device}/attributes/${name}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ value }),
    }),

  state: (device: string) =>
    request<{ state: DeviceStateName; status: string }>(
      `/api/v1/devices/${device}/state`,
    ),

  properties: (device: string) =>
    request<Record<string, string[]>>(`/api/v1/db/devices/${device}/properties`),

  putProperty: (device: string, name: string, values: string[]) =>
    request<void>(`/api/v1/db/devices/${device}/properties/${name}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ values }),
    }),

  deleteProperty: (device: string, name: string) =>
    request<void>(`/api/v1/db/devices/${device}/properties/${name}`, {
      method: "DELETE",
    }),

  servers: () => request<FleetView>("/api/v1/servers"),

  serverAction: (serverId: string, action: "start" | "stop") =>
    request<{ poll: string }>(`/api/v1/servers/${serverId}/${action}`, {
      method: "POST",
    }),
};
