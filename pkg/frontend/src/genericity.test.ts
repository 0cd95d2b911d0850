/**
 * Genericity audit: a brand-new device class — command names invented at
 * test time, covering every payload type — must render fully operable
 * forms from describe data alone.  The console modules under test contain
 * no device-class names, so this is the unit-level counterpart of running
 * against a freshly generated class.
 */
import { describe, expect, it } from "vitest";
import type { CommandInfo } from "./api.js";
import { renderCommandForm } from "./render.js";
import { draftToValue, emptyDraft, formFor, TYPE_TAGS } from "./values.js";

function freshClass(seed: number): CommandInfo[] {
  // deterministic but arbitrary names nothing in src/ could ever reference
  return TYPE_TAGS.map((tag, i) => ({
    name: `Xq${seed}_${i.toString(36)}_${tag.slice(3)}`,
    in_type: tag,
    out_type: TYPE_TAGS[(i + 7) % TYPE_TAGS.length]!,
    description: `invented command ${i}`,
    allowed_states: [],
  }));
}

describe("console genericity", () => {
  const commands = freshClass(42);

  it("renders an operable form for every command of a never-seen class", () => {
    for (const info of commands) {
      const draft = emptyDraft(info.in_type);
      const html = renderCommandForm(info, draft);
      expect(html, info.name).toContain(`data-execute="${info.name}"`);
      const form = formFor(info.in_type);
      if (form.kind === "scalar") {
        // exactly one input control bound to this command
        expect(html).toContain(`data-cmd="${info.name}"`);
      }
      if (form.kind === "list") expect(html).toContain('data-add="items"');
      if (form.kind === "mixed") {
        expect(html).toContain('data-list="numbers"');
        expect(html).toContain('data-list="strings"');
      }
    }
  });

  it("a filled draft produces a payload of exactly the declared type", () => {
    const fill: Record<string, string> = {
      boolean: "true", integer: "5", float: "0.25", string: "abc", state: "ON",
    };
    for (const info of commands) {
      const form = formFor(info.in_type);
      const draft = emptyDraft(info.in_type);
      if (form.kind === "scalar") draft.scalar = fill[form.input]!;
      if (form.kind === "list") draft.items = [fill[form.input]!, fill[form.input]!];
      if (form.kind === "mixed") {
        draft.numbers = [fill[form.numbers]!];
        draft.strings = ["s1", "s2"];
      }
      const result = draftToValue(info.in_type, draft);
      expect(result.ok, info.name).toBe(true);
      if (result.ok) expect(result.value.type).toBe(info.in_type);
    }
  });

  it("invalid input disables execution for every typed command", () => {
    for (const info of commands) {
      const form = formFor(info.in_type);
      if (form.kind !== "scalar" || form.input === "string") continue;
      const draft = emptyDraft(info.in_type);
      draft.scalar = "!!definitely not valid!!";
      const html = renderCommandForm(info, draft);
      if (form.input === "boolean" || form.input === "state") {
        // selects cannot hold invalid text, but the validator still guards
        expect(draftToValue(info.in_type, draft).ok).toBe(false);
      } else {
        expect(html, info.name).toContain("disabled");
      }
    }
  });
});
