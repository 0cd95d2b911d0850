/**
 * Pure HTML-string renderers for every panel.  No DOM access and no state:
 * each function maps a model to markup, which both keeps rendering testable
 * in plain node and guarantees the UI is a function of fetched data.
 *
 * Interactive elements carry data-* attributes; main.ts wires them up with
 * event delegation.
 */
import type {
  AttributeConfig,
  AttributeReading,
  CommandInfo,
  FleetView,
} from "./api.js";
import { actionFor, badgeFor, orderedHosts, orderedServers } from "./fleet.js";
import type { LogEntry } from "./log.js";
import { describeEntry } from "./log.js";
import type { DeviceTree } from "./tree.js";
import type { Draft } from "./values.js";
import { DEVICE_STATES, draftToValue, formFor, formatValue } from "./values.js";

export function esc(text: unknown): string {
  return String(text)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

// ---------------------------------------------------------------------------
// device tree

export function renderTree(tree: DeviceTree, selected: string | null): string {
  if (tree.domains.length === 0)
    return '<p class="empty">no devices in the database</p>';
  const stale = tree.stale
    ? '<p class="stale" data-testid="tree-stale">refresh failed — showing stale tree</p>'
    : "";
  const domains = tree.domains
    .map(
      (d) => `<details open><summary>${esc(d.name)}</summary>${d.families
        .map(
          (f) => `<details open><summary>${esc(f.name)}</summary><ul>${f.members
            .map((m) => {
              const cls = m.device === selected ? ' class="selected"' : "";
              return `<li${cls}><a href="#" data-device="${esc(m.device)}">${esc(m.name)}</a></li>`;
            })
            .join("")}</ul></details>`,
        )
        .join("")}</details>`,
    )
    .join("");
  return stale + domains;
}

// ---------------------------------------------------------------------------
// command forms

function scalarInput(cmd: string, field: string, kind: string, value: string): string {
  if (kind === "boolean" || kind === "state") {
    const options = kind === "boolean" ? ["false", "true"] : DEVICE_STATES;
    return `<select data-cmd="${esc(cmd)}" data-field="${esc(field)}">${options
      .map((o) => `<option${o === value ? " selected" : ""}>${o}</option>`)
      .join("")}</select>`;
  }
  return `<input data-cmd="${esc(cmd)}" data-field="${esc(field)}" value="${esc(value)}" placeholder="${kind}">`;
}

function listEditor(cmd: string, field: string, kind: string, items: string[]): string {
  const rows = items
    .map(
      (item, i) =>
        `<div class="list-row">${scalarInput(cmd, `${field}:${i}`, kind, item)}` +
        `<button data-cmd="${esc(cmd)}" data-remove="${esc(field)}:${i}">×</button></div>`,
    )
    .join("");
  return `<div class="list-editor" data-list="${esc(field)}">${rows}` +
    `<button data-cmd="${esc(cmd)}" data-add="${esc(field)}">+ ${kind}</button></div>`;
}

export function renderCommandForm(info: CommandInfo, draft: Draft): string {
  const form = formFor(info.in_type);
  const validation = draftToValue(info.in_type, draft);
  let inputs = "";
  if (form.kind === "scalar")
    inputs = scalarInput(info.name, "scalar", form.input, draft.scalar);
  else if (form.kind === "list")
    inputs = listEditor(info.name, "items", form.input, draft.items);
  else if (form.kind === "mixed")
    inputs =
      listEditor(info.name, "numbers", form.numbers, draft.numbers) +
      listEditor(info.name, "strings", "string", draft.strings);
  const problem = validation.ok
    ? ""
    : `<span class="invalid" data-testid="invalid-${esc(info.name)}">${esc(validation.error)}</span>`;
  const disabled = validation.ok ? "" : " disabled";
  return `<div class="command" data-testid="cmd-${esc(info.name)}">
  <div class="command-head"><code>${esc(info.name)}</code>
    <span class="sig">${esc(info.in_type)} → ${esc(info.out_type)}</span></div>
  ${info.description ? `<p class="desc">${esc(info.description)}</p>` : ""}
  ${inputs}
  <button data-execute="${esc(info.name)}"${disabled}>Execute</button>
  ${problem}
</div>`;
}

export function renderCommands(infos: CommandInfo[], drafts: Map<string, Draft>): string {
  return infos
    .map((info) => {
      const draft = drafts.get(info.name);
      if (!draft) return "";
      return renderCommandForm(info, draft);
    })
    .join("");
}

// ---------------------------------------------------------------------------
// attributes

function renderReading(reading: AttributeReading | undefined, error: string | undefined): string {
  if (error) return `<span class="error">${esc(error)}</span>`;
  if (!reading) return '<span class="muted">—</span>';
  const value = Array.isArray(reading.value)
    ? JSON.stringify(reading.value)
    : String(reading.value);
  return `<span class="reading">${esc(value)}</span> <span class="muted">${esc(reading.source)}</span>`;
}

export function renderAttributes(
  configs: AttributeConfig[],
  readings: Map<string, AttributeReading>,
  errors: Map<string, string>,
): string {
  if (configs.length === 0) return '<p class="empty">no attributes</p>';
  const rows = configs
    .map((cfg) => {
      const writable = cfg.writable !== "Read";
      const writer = writable
        ? `<input data-attr-write="${esc(cfg.name)}" placeholder="new value (JSON)">` +
          `<button data-attr-put="${esc(cfg.name)}">Write</button>`
        : "";
      return `<tr data-testid="attr-${esc(cfg.name)}">
  <td><code>${esc(cfg.name)}</code></td>
  <td>${esc(cfg.element_type)} ${esc(cfg.format)}${cfg.unit ? ` [${esc(cfg.unit)}]` : ""}</td>
  <td>${esc(cfg.writable)}</td>
  <td data-reading="${esc(cfg.name)}">${renderReading(readings.get(cfg.name), errors.get(cfg.name))}</td>
  <td>${writer}</td>
</tr>`;
    })
    .join("");
  return `<table class="attributes"><thead>
<tr><th>attribute</th><th>type</th><th>access</th><th>value</th><th></th></tr>
</thead><tbody>${rows}</tbody></table>`;
}

// ---------------------------------------------------------------------------
// properties

export function renderProperties(
  props: Record<string, string[]>,
  drafts: Map<string, string>,
  error: string | null,
): string {
  const names = Object.keys(props).sort();
  const rows = names
    .map((name) => {
      const draft = drafts.get(name) ?? props[name]!.join("\n");
      return `<tr data-testid="prop-${esc(name)}">
  <td><code>${esc(name)}</code></td>
  <td><textarea data-prop="${esc(name)}" rows="${Math.max(props[name]!.length, 1)}">${esc(draft)}</textarea></td>
  <td><button data-prop-save="${esc(name)}">Save</button>
      <button data-prop-delete="${esc(name)}">Delete</button></td>
</tr>`;
    })
    .join("");
  return `${error ? `<p class="error" data-testid="prop-error">${esc(error)}</p>` : ""}
<table class="properties"><thead><tr><th>property</th><th>values (one per line)</th><th></th></tr></thead>
<tbody>${rows}</tbody></table>
<div class="prop-new">
  <input data-prop-new-name placeholder="new property name">
  <button data-prop-add>Add</button>
</div>`;
}

// ---------------------------------------------------------------------------
// fleet

export function renderFleet(view: FleetView, pending: ReadonlySet<string>): string {
  const hosts = orderedHosts(view);
  if (hosts.length === 0) return '<p class="empty">no servers registered</p>';
  return hosts
    .map((host) => {
      const down = host.starter_state === "UNKNOWN";
      const rows = orderedServers(host)
        .map((row) => {
          const badge = badgeFor(row, pending);
          const action = actionFor(host, row, pending);
          const button = action
            ? `<button data-server-action="${esc(row.server_id)}" data-action="${action}">${action}</button>`
            : "";
          return `<tr data-testid="server-${esc(row.server_id)}">
  <td><code>${esc(row.server_id)}</code></td>
  <td>${row.level}</td>
  <td><span class="badge badge-${badge}" data-badge="${esc(row.server_id)}">${badge}</span></td>
  <td>${row.device_count}</td>
  <td>${button}</td>
</tr>`;
        })
        .join("");
      return `<section class="host">
<h3>${esc(host.hostname)} <span class="badge badge-${down ? "unknown" : "running"}">${esc(host.starter_state)}</span></h3>
<table><thead><tr><th>server</th><th>level</th><th>state</th><th>devices</th><th></th></tr></thead>
<tbody>${rows}</tbody></table></section>`;
    })
    .join("");
}

// ---------------------------------------------------------------------------
// execution log

export function renderLog(entries: LogEntry[]): string {
  if (entries.length === 0) return '<p class="empty">nothing executed yet</p>';
  return `<ul class="log">${entries
    .slice()
    .reverse()
    .map(
      (e) =>
        `<li class="${e.outcome.ok ? "ok" : "failed"}">` +
        `<time>${e.at.toLocaleTimeString()}</time> ${esc(describeEntry(e))}</li>`,
    )
    .join("")}</ul>`;
}
