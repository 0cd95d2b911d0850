import { describe, expect, it } from "vitest";
import {
  DEVICE_STATES,
  draftToValue,
  emptyDraft,
  formFor,
  formatValue,
  TYPE_TAGS,
  type Draft,
  type TypeTag,
} from "./values.js";

describe("type tag table", () => {
  it("has exactly 20 tags and 14 states", () => {
    expect(TYPE_TAGS).toHaveLength(20);
    expect(DEVICE_STATES).toHaveLength(14);
  });

  it("assigns a form to every tag", () => {
    for (const tag of TYPE_TAGS) {
      const form = formFor(tag);
      expect(["none", "scalar", "list", "mixed"]).toContain(form.kind);
    }
    expect(formFor("DevVoid").kind).toBe("none");
    expect(formFor("DevLong")).toEqual({
      kind: "scalar",
      input: "integer",
      range: { min: -2147483648, max: 2147483647 },
    });
    expect(formFor("DevVarDoubleStringArray")).toMatchObject({
      kind: "mixed",
      numbers: "float",
    });
  });
});

function scalarDraft(text: string): Draft {
  return { scalar: text, items: [], numbers: [], strings: [] };
}

describe("draft validation", () => {
  it("accepts a valid integer and rejects garbage", () => {
    expect(draftToValue("DevLong", scalarDraft("7"))).toEqual({
      ok: true,
      value: { type: "DevLong", value: 7 },
    });
    const bad = draftToValue("DevLong", scalarDraft("abc"));
    expect(bad.ok).toBe(false);
    if (!bad.ok) expect(bad.error).toMatch(/not an integer/);
  });

  it("enforces integer ranges per tag", () => {
    expect(draftToValue("DevShort", scalarDraft("32767")).ok).toBe(true);
    expect(draftToValue("DevShort", scalarDraft("32768")).ok).toBe(false);
    expect(draftToValue("DevUShort", scalarDraft("-1")).ok).toBe(false);
    expect(draftToValue("DevULong", scalarDraft("4294967295")).ok).toBe(true);
  });

  it("handles booleans, floats, strings, states", () => {
    expect(draftToValue("DevBoolean", scalarDraft("true"))).toEqual({
      ok: true,
      value: { type: "DevBoolean", value: true },
    });
    expect(draftToValue("DevBoolean", scalarDraft("yes")).ok).toBe(false);
    expect(draftToValue("DevDouble", scalarDraft("1.5e3"))).toEqual({
      ok: true,
      value: { type: "DevDouble", value: 1500 },
    });
    expect(draftToValue("DevDouble", scalarDraft("")).ok).toBe(false);
    expect(draftToValue("DevString", scalarDraft("  spaces kept "))).toEqual({
      ok: true,
      value: { type: "DevString", value: "  spaces kept " },
    });
    expect(draftToValue("DevState", scalarDraft("MOVING"))).toEqual({
      ok: true,
      value: { type: "DevState", value: "MOVING" },
    });
    expect(draftToValue("DevState", scalarDraft("BROKEN")).ok).toBe(false);
  });

  it("validates each list item and reports its position", () => {
    const draft: Draft = { scalar: "", items: ["1", "x", "3"], numbers: [], strings: [] };
    const result = draftToValue("DevVarLongArray", draft);
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.error).toMatch(/item 2/);
    draft.items[1] = "2";
    expect(draftToValue("DevVarLongArray", draft)).toEqual({
      ok: true,
      value: { type: "DevVarLongArray", value: [1, 2, 3] },
    });
  });

  it("builds mixed payloads with the right numeric key", () => {
    const draft: Draft = { scalar: "", items: [], numbers: ["7"], strings: ["x"] };
    expect(draftToValue("DevVarLongStringArray", draft)).toEqual({
      ok: true,
      value: { type: "DevVarLongStringArray", value: { longs: [7], strings: ["x"] } },
    });
    expect(draftToValue("DevVarDoubleStringArray", draft)).toEqual({
      ok: true,
      value: {
        type: "DevVarDoubleStringArray",
        value: { doubles: [7], strings: ["x"] },
      },
    });
    const frac: Draft = { ...draft, numbers: ["7.5"] };
    expect(draftToValue("DevVarLongStringArray", frac).ok).toBe(false);
  });

  it("empty drafts for list types are valid empty sequences", () => {
    for (const tag of TYPE_TAGS) {
      const form = formFor(tag);
      if (form.kind === "list" || form.kind === "mixed" || form.kind === "none") {
        const result = draftToValue(tag, emptyDraft(tag));
        expect(result.ok, tag).toBe(true);
      }
    }
  });

  it("DevVoid always validates to a void value", () => {
    expect(draftToValue("DevVoid", emptyDraft("DevVoid"))).toEqual({
      ok: true,
      value: { type: "DevVoid" },
    });
  });
});

describe("formatting", () => {
  it("renders each shape on one line", () => {
    expect(formatValue({ type: "DevVoid" })).toBe("(void)");
    expect(formatValue({ type: "DevLong", value: 7 })).toBe("DevLong 7");
    expect(formatValue({ type: "DevString", value: "hi" })).toBe('DevString "hi"');
    expect(formatValue({ type: "DevVarLongArray", value: [1, 2] })).toBe(
      "DevVarLongArray [1, 2]",
    );
    expect(
      formatValue({
        type: "DevVarLongStringArray",
        value: { longs: [7], strings: ["x"] },
      }),
    ).toBe("DevVarLongStringArray [7] + [x]");
  });
});

describe("round trip against random drafts", () => {
  it("every non-void tag can produce a value of its own type", () => {
    const sample: Record<string, string> = {
      boolean: "true",
      integer: "11",
      float: "2.5",
      string: "s",
      state: "FAULT",
    };
    for (const tag of TYPE_TAGS.filter((t): t is TypeTag => t !== "DevVoid")) {
      const form = formFor(tag);
      const draft = emptyDraft(tag);
      if (form.kind === "scalar") draft.scalar = sample[form.input]!;
      if (form.kind === "list") draft.items = [sample[form.input]!];
      if (form.kind === "mixed") {
        draft.numbers = [sample[form.numbers]!];
        draft.strings = ["str"];
      }
      const result = draftToValue(tag, draft);
      expect(result.ok, tag).toBe(true);
      if (result.ok) expect(result.value.type).toBe(tag);
    }
  });
});
