/**
 * The console's value model: the 20 payload type tags, the canonical JSON
 * form used by the gateway, and the describe-driven input form machinery.
 *
 * Everything here is a pure function of type information — no device class
 * is ever named, which is what keeps the console generic.
 */

export const TYPE_TAGS = [
  "DevVoid", "DevBoolean", "DevShort", "DevLong", "DevFloat", "DevDouble",
  "DevUShort", "DevULong", "DevString", "DevVarBooleanArray",
  "DevVarShortArray", "DevVarLongArray", "DevVarFloatArray",
  "DevVarDoubleArray", "DevVarUShortArray", "DevVarULongArray",
  "DevVarStringArray", "DevVarLongStringArray", "DevVarDoubleStringArray",
  "DevState",
] as const;

export type TypeTag = (typeof TYPE_TAGS)[number];

export const DEVICE_STATES = [
  "ON", "OFF", "CLOSE", "OPEN", "INSERT", "EXTRACT", "MOVING", "STANDBY",
  "FAULT", "INIT", "RUNNING", "ALARM", "DISABLE", "UNKNOWN",
] as const;

export type DeviceStateName = (typeof DEVICE_STATES)[number];

/** A payload value in the gateway's canonical JSON mapping. */
export interface JsonValue {
  type: TypeTag;
  value?: unknown;
}

// ---------------------------------------------------------------------------
// scalar kinds and ranges

export type ScalarKind = "boolean" | "integer" | "float" | "string" | "state";

interface IntRange {
  min: number;
  max: number;
}

const INT_RANGES: Partial<Record<TypeTag, IntRange>> = {
  DevShort: { min: -32768, max: 32767 },
  DevUShort: { min: 0, max: 65535 },
  DevLong: { min: -2147483648, max: 2147483647 },
  DevULong: { min: 0, max: 4294967295 },
  DevVarShortArray: { min: -32768, max: 32767 },
  DevVarUShortArray: { min: 0, max: 65535 },
  DevVarLongArray: { min: -2147483648, max: 2147483647 },
  DevVarULongArray: { min: 0, max: 4294967295 },
  DevVarLongStringArray: { min: -2147483648, max: 2147483647 },
};

const SCALAR_KINDS: Partial<Record<TypeTag, ScalarKind>> = {
  DevBoolean: "boolean",
  DevShort: "integer",
  DevLong: "integer",
  DevUShort: "integer",
  DevULong: "integer",
  DevFloat: "float",
  DevDouble: "float",
  DevString: "string",
  DevState: "state",
};

const SEQUENCE_ELEM: Partial<Record<TypeTag, ScalarKind>> = {
  DevVarBooleanArray: "boolean",
  DevVarShortArray: "integer",
  DevVarLongArray: "integer",
  DevVarUShortArray: "integer",
  DevVarULongArray: "integer",
  DevVarFloatArray: "float",
  DevVarDoubleArray: "float",
  DevVarStringArray: "string",
};

// ---------------------------------------------------------------------------
// form model: what input widgets a command argument needs

export type FormModel =
  | { kind: "none" }
  | { kind: "scalar"; input: ScalarKind; range?: IntRange }
  | { kind: "list"; input: ScalarKind; range?: IntRange }
  | { kind: "mixed"; numbers: "integer" | "float"; range?: IntRange };

/** Widget description for a command input type — pure describe-driven. */
export function formFor(tag: TypeTag): FormModel {
  if (tag === "DevVoid") return { kind: "none" };
  const scalar = SCALAR_KINDS[tag];
  if (scalar) return { kind: "scalar", input: scalar, range: INT_RANGES[tag] };
  const elem = SEQUENCE_ELEM[tag];
  if (elem) return { kind: "list", input: elem, range: INT_RANGES[tag] };
  if (tag === "DevVarLongStringArray")
    return { kind: "mixed", numbers: "integer", range: INT_RANGES[tag] };
  return { kind: "mixed", numbers: "float" };
}

// ---------------------------------------------------------------------------
// drafts: raw text form state, validated into JSON values

export interface Draft {
  scalar: string;
  items: string[];
  numbers: string[];
  strings: string[];
}

export function emptyDraft(tag: TypeTag): Draft {
  const form = formFor(tag);
  const d: Draft = { scalar: "", items: [], numbers: [], strings: [] };
  if (form.kind === "scalar") {
    if (form.input === "boolean") d.scalar = "false";
    if (form.input === "state") d.scalar = "ON";
  }
  return d;
}

export type Validation =
  | { ok: true; value: JsonValue }
  | { ok: false; error: string };

function parseScalar(
  kind: ScalarKind, text: string, range: IntRange | undefined, what: string,
): { ok: true; value: unknown } | { ok: false; error: string } {
  const t = text.trim();
  switch (kind) {
    case "boolean":
      if (t === "true") return { ok: true, value: true };
      if (t === "false") return { ok: true, value: false };
      return { ok: false, error: `${what}: expected true or false` };
    case "integer": {
      if (!/^[+-]?\d+$/.test(t)) return { ok: false, error: `${what}: not an integer` };
      const n = Number(t);
      if (!Number.isSafeInteger(n)) return { ok: false, error: `${what}: out of range` };
      if (range && (n < range.min || n > range.max))
        return { ok: false, error: `${what}: must be in [${range.min}, ${range.max}]` };
      return { ok: true, value: n };
    }
    case "float": {
      if (t === "") return { ok: false, error: `${what}: empty` };
      const x = Number(t);
      if (!Number.isFinite(x)) return { ok: false, error: `${what}: not a finite number` };
      return { ok: true, value: x };
    }
    case "string":
      return { ok: true, value: text };
    case "state":
      if ((DEVICE_STATES as readonly string[]).includes(t)) return { ok: true, value: t };
      return { ok: false, error: `${what}: unknown state` };
  }
}

/** Validate a draft against its input type; an invalid draft carries the
 * first problem found and disables execution. */
export function draftToValue(tag: TypeTag, draft: Draft): Validation {
  const form = formFor(tag);
  if (form.kind === "none") return { ok: true, value: { type: "DevVoid" } };
  if (form.kind === "scalar") {
    const r = parseScalar(form.input, draft.scalar, form.range, "value");
    if (!r.ok) return r;
    return { ok: true, value: { type: tag, value: r.value } };
  }
  if (form.kind === "list") {
    const out: unknown[] = [];
    for (let i = 0; i < draft.items.length; i++) {
      const r = parseScalar(form.input, draft.items[i] ?? "", form.range, `item ${i + 1}`);
      if (!r.ok) return r;
      out.push(r.value);
    }
    return { ok: true, value: { type: tag, value: out } };
  }
  const nums: unknown[] = [];
  for (let i = 0; i < draft.numbers.length; i++) {
    const r = parseScalar(form.numbers, draft.numbers[i] ?? "", form.range, `number ${i + 1}`);
    if (!r.ok) return r;
    nums.push(r.value);
  }
  const numKey = tag === "DevVarLongStringArray" ? "longs" : "doubles";
  return {
    ok: true,
    value: { type: tag, value: { [numKey]: nums, strings: [...draft.strings] } },
  };
}

// ---------------------------------------------------------------------------
// display

/** One-line human rendering of a canonical JSON value. */
export function formatValue(v: JsonValue): string {
  if (v.type === "DevVoid") return "(void)";
  const val = v.value;
  if (v.type === "DevVarLongStringArray" || v.type === "DevVarDoubleStringArray") {
    const obj = val as { longs?: unknown[]; doubles?: unknown[]; strings: unknown[] };
    const nums = obj.longs ?? obj.doubles ?? [];
    return `${v.type} [${nums.join(", ")}] + [${obj.strings.map(String).join(", ")}]`;
  }
  if (Array.isArray(val)) return `${v.type} [${val.join(", ")}]`;
  return `${v.type} ${JSON.stringify(val)}`;
}
