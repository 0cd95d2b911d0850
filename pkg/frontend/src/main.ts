/**
 * Console application: state, event wiring and refresh loops around the
 * pure renderers.  All data flows through the gateway's /api/v1 routes.
 */
import type {
  AttributeConfig,
  AttributeReading,
  CommandInfo,
  FleetView,
} from "./api.js";
import { api, ApiError } from "./api.js";
import { settle } from "./fleet.js";
import type { LogEntry } from "./log.js";
import { appendLog } from "./log.js";
import {
  renderAttributes,
  renderCommands,
  renderFleet,
  renderLog,
  renderProperties,
  renderTree,
} from "./render.js";
import type { DeviceTree } from "./tree.js";
import { buildTree } from "./tree.js";
import type { Draft, JsonValue } from "./values.js";
import { draftToValue, emptyDraft } from "./values.js";

interface State {
  tree: DeviceTree;
  device: string | null;
  commands: CommandInfo[];
  drafts: Map<string, Draft>;
  attributes: AttributeConfig[];
  readings: Map<string, AttributeReading>;
  readErrors: Map<string, string>;
  properties: Record<string, string[]>;
  propDrafts: Map<string, string>;
  propError: string | null;
  fleet: FleetView;
  pendingIssued: Map<string, string>; // server_id -> observed state at issue
  log: LogEntry[];
  autoRefresh: boolean;
  refreshPeriodS: number;
}

const state: State = {
  tree: { domains: [], stale: false },
  device: null,
  commands: [],
  drafts: new Map(),
  attributes: [],
  readings: new Map(),
  readErrors: new Map(),
  properties: {},
  propDrafts: new Map(),
  propError: null,
  fleet: { hosts: [] },
  pendingIssued: new Map(),
  log: [],
  autoRefresh: false,
  refreshPeriodS: 2,
};

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function errorText(exc: unknown): string {
  return exc instanceof ApiError ? exc.message : String(exc);
}

// ---------------------------------------------------------------------------
// painting

function paintTree(): void {
  el("tree").innerHTML = renderTree(state.tree, state.device);
}

function paintDevice(): void {
  el("device-title").textContent = state.device ?? "select a device";
  el("commands").innerHTML = state.device
    ? renderCommands(state.commands, state.drafts)
    : "";
  el("attributes").innerHTML = state.device
    ? renderAttributes(state.attributes, state.readings, state.readErrors)
    : "";
  el("properties").innerHTML = state.device
    ? renderProperties(state.properties, state.propDrafts, state.propError)
    : "";
}

function paintFleet(): void {
  el("fleet").innerHTML = renderFleet(state.fleet, new Set(state.pendingIssued.keys()));
}

function paintLog(): void {
  el("log").innerHTML = renderLog(state.log);
}

// ---------------------------------------------------------------------------
// refresh loops (at most one in flight per panel)

let treeBusy = false;
async function refreshTree(): Promise<void> {
  if (treeBusy) return;
  treeBusy = true;
  try {
    state.tree = buildTree(await api.browse());
  } catch {
    state.tree = { ...state.tree, stale: true };
  } finally {
    treeBusy = false;
  }
  paintTree();
}

let attrBusy = false;
async function refreshReadings(): Promise<void> {
  const device = state.device;
  if (!device || attrBusy) return;
  attrBusy = true;
  try {
    for (const cfg of state.attributes) {
      if (cfg.writable === "Write") continue;
      try {
        state.readings.set(cfg.name, await api.readAttribute(device, cfg.name));
        state.readErrors.delete(cfg.name);
      } catch (exc) {
        state.readErrors.set(cfg.name, errorText(exc));
      }
    }
  } finally {
    attrBusy = false;
  }
  if (state.device === device) paintDevice();
}

let fleetBusy = false;
async function refreshFleet(): Promise<void> {
  if (fleetBusy) return;
  fleetBusy = true;
  try {
    state.fleet = await api.servers();
    const still = settle(state.fleet, state.pendingIssued);
    for (const id of [...state.pendingIssued.keys()])
      if (!still.has(id)) state.pendingIssued.delete(id);
    el("fleet-error").textContent = "";
  } catch (exc) {
    el("fleet-error").textContent = errorText(exc);
  } finally {
    fleetBusy = false;
  }
  paintFleet();
}

async function selectDevice(device: string): Promise<void> {
  state.device = device;
  state.commands = [];
  state.drafts = new Map();
  state.attributes = [];
  state.readings = new Map();
  state.readErrors = new Map();
  state.properties = {};
  state.propDrafts = new Map();
  state.propError = null;
  paintTree();
  paintDevice();
  try {
    const [commands, attributes, properties] = await Promise.all([
      api.commands(device),
      api.attributes(device),
      api.properties(device),
    ]);
    if (state.device !== device) return; // user moved on meanwhile
    state.commands = commands;
    for (const info of commands) state.drafts.set(info.name, emptyDraft(info.in_type));
    state.attributes = attributes;
    state.properties = properties;
  } catch (exc) {
    state.propError = errorText(exc);
  }
  paintDevice();
  void refreshReadings();
}

// ---------------------------------------------------------------------------
// actions

async function executeCommand(name: string): Promise<void> {
  const device = state.device;
  const info = state.commands.find((c) => c.name === name);
  const draft = state.drafts.get(name);
  if (!device || !info || !draft) return;
  const validated = draftToValue(info.in_type, draft);
  if (!validated.ok) return;
  const request: JsonValue | null =
    info.in_type === "DevVoid" ? null : validated.value;
  const started = performance.now();
  let outcome: LogEntry["outcome"];
  try {
    outcome = { ok: true, value: await api.runCommand(device, name, request) };
  } catch (exc) {
    outcome = { ok: false, error: errorText(exc) };
  }
  state.log = appendLog(state.log, {
    at: new Date(),
    device,
    command: name,
    request,
    outcome,
    durationMs: performance.now() - started,
  });
  paintLog();
}

async function writeAttribute(name: string, raw: string): Promise<void> {
  const device = state.device;
  if (!device) return;
  let value: unknown = raw;
  try {
    value = JSON.parse(raw);
  } catch {
    /* not JSON: send the raw text as a string */
  }
  try {
    await api.writeAttribute(device, name, value);
    state.readErrors.delete(name);
  } catch (exc) {
    state.readErrors.set(name, errorText(exc));
    paintDevice();
    return;
  }
  try {
    state.readings.set(name, await api.readAttribute(device, name));
  } catch (exc) {
    state.readErrors.set(name, errorText(exc));
  }
  paintDevice();
}

async function saveProperty(name: string, text: string): Promise<void> {
  const device = state.device;
  if (!device) return;
  const values = text.split("\n").filter((line, i, all) =>
    line !== "" || i < all.length - 1);
  try {
    await api.putProperty(device, name, values);
    state.properties = await api.properties(device);
    state.propDrafts.delete(name);
    state.propError = null;
  } catch (exc) {
    state.propError = errorText(exc); // keep the draft for another try
  }
  paintDevice();
}

async function deleteProperty(name: string): Promise<void> {
  const device = state.device;
  if (!device) return;
  try {
    await api.deleteProperty(device, name);
    state.properties = await api.properties(device);
    state.propDrafts.delete(name);
    state.propError = null;
  } catch (exc) {
    state.propError = errorText(exc);
  }
  paintDevice();
}

async function fleetAction(serverId: string, action: "start" | "stop"): Promise<void> {
  let observed = "";
  for (const host of state.fleet.hosts)
    for (const row of host.servers)
      if (row.server_id === serverId) observed = row.observed;
  state.pendingIssued.set(serverId, observed);
  paintFleet();
  try {
    await api.serverAction(serverId, action);
  } catch (exc) {
    state.pendingIssued.delete(serverId);
    el("fleet-error").textContent = errorText(exc);
    paintFleet();
    return;
  }
  void refreshFleet();
}

// ---------------------------------------------------------------------------
// draft edits

function updateDraft(cmd: string, field: string, value: string): void {
  const draft = state.drafts.get(cmd);
  if (!draft) return;
  if (field === "scalar") {
    draft.scalar = value;
  } else {
    const [listName, index] = field.split(":") as [keyof Draft, string];
    const list = draft[listName];
    if (Array.isArray(list)) list[Number(index)] = value;
  }
  el("commands").innerHTML = renderCommands(state.commands, state.drafts);
}

function mutateList(cmd: string, spec: string, add: boolean): void {
  const draft = state.drafts.get(cmd);
  if (!draft) return;
  if (add) {
    const list = draft[spec as keyof Draft];
    if (Array.isArray(list)) list.push("");
  } else {
    const [listName, index] = spec.split(":") as [keyof Draft, string];
    const list = draft[listName];
    if (Array.isArray(list)) list.splice(Number(index), 1);
  }
  el("commands").innerHTML = renderCommands(state.commands, state.drafts);
}

// ---------------------------------------------------------------------------
// wiring

function wire(): void {
  document.body.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const device = target.dataset["device"];
    if (device) {
      event.preventDefault();
      void selectDevice(device);
      return;
    }
    const execute = target.dataset["execute"];
    if (execute) return void executeCommand(execute);
    const add = target.dataset["add"];
    if (add && target.dataset["cmd"]) return mutateList(target.dataset["cmd"], add, true);
    const remove = target.dataset["remove"];
    if (remove && target.dataset["cmd"])
      return mutateList(target.dataset["cmd"], remove, false);
    const attrPut = target.dataset["attrPut"];
    if (attrPut) {
      const input = document.querySelector<HTMLInputElement>(
        `[data-attr-write="${attrPut}"]`,
      );
      if (input) void writeAttribute(attrPut, input.value);
      return;
    }
    const propSave = target.dataset["propSave"];
    if (propSave) {
      const area = document.querySelector<HTMLTextAreaElement>(
        `[data-prop="${propSave}"]`,
      );
      if (area) void saveProperty(propSave, area.value);
      return;
    }
    const propDelete = target.dataset["propDelete"];
    if (propDelete) return void deleteProperty(propDelete);
    if (target.dataset["propAdd"] !== undefined) {
      const input = document.querySelector<HTMLInputElement>("[data-prop-new-name]");
      if (input && input.value.trim()) void saveProperty(input.value.trim(), "");
      return;
    }
    const serverAction = target.dataset["serverAction"];
    const action = target.dataset["action"];
    if (serverAction && (action === "start" || action === "stop"))
      return void fleetAction(serverAction, action);
  });

  document.body.addEventListener("input", (event) => {
    const target = event.target as HTMLElement;
    const cmd = target.dataset["cmd"];
    const field = target.dataset["field"];
    if (cmd && field)
      updateDraft(cmd, field, (target as HTMLInputElement).value);
    const prop = target.dataset["prop"];
    if (prop) state.propDrafts.set(prop, (target as HTMLTextAreaElement).value);
  });

  const toggle = el("auto-refresh") as HTMLInputElement;
  const period = el("refresh-period") as HTMLInputElement;
  toggle.addEventListener("change", () => {
    state.autoRefresh = toggle.checked;
  });
  period.addEventListener("change", () => {
    const seconds = Number(period.value);
    state.refreshPeriodS = Math.min(30, Math.max(0.5, Number.isFinite(seconds) ? seconds : 2));
    period.value = String(state.refreshPeriodS);
  });
  el("tree-refresh").addEventListener("click", () => void refreshTree());
}

function scheduleLoops(): void {
  setInterval(() => void refreshFleet(), 2000);
  let lastAttrRefresh = 0;
  setInterval(() => {
    if (!state.autoRefresh) return;
    const now = Date.now();
    if (now - lastAttrRefresh >= state.refreshPeriodS * 1000) {
      lastAttrRefresh = now;
      void refreshReadings();
    }
  }, 250);
}

export function start(): void {
  wire();
  paintTree();
  paintDevice();
  paintFleet();
  paintLog();
  void refreshTree();
  void refreshFleet();
  scheduleLoops();
}

start();
