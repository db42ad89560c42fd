import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { BundleLoadError, auditLinks, validateBundle } from "../src/audit.js";
import { decodeFragment, encodeFragment, initialState } from "../src/state.js";
import type { NotesBundle } from "../src/types.js";

const raw = readFileSync(new URL("./fixtures/notes.json", import.meta.url), "utf-8");

function fresh(): NotesBundle {
  return JSON.parse(raw);
}

describe("bundle validation", () => {
  it("accepts a bundle produced by the pipeline", () => {
    expect(() => validateBundle(fresh())).not.toThrow();
  });

  it("names the missing field", () => {
    const doc: Record<string, unknown> = { ...fresh() };
    delete doc["gesture_replays"];
    expect(() => validateBundle(doc)).toThrow(/gesture_replays/);
  });

  it("rejects unknown schema versions", () => {
    const doc = { ...fresh(), schema_version: "2" };
    expect(() => validateBundle(doc)).toThrow(BundleLoadError);
  });

  it("rejects malformed points with a path", () => {
    const doc = fresh();
    (doc.gesture_replays[0]!.points as unknown[])[0] = [0.1, 0.2];
    expect(() => validateBundle(doc)).toThrow(/points\[0\]/);
  });
});

describe("link audit", () => {
  it("reports 0 broken links on a bundle passing the primary suite", () => {
    expect(auditLinks(fresh())).toEqual([]);
  });

  it("reports spans whose replay target vanished", () => {
    const doc = fresh();
    doc.gesture_replays = doc.gesture_replays.slice(1);
    const problems = auditLinks(doc);
    expect(problems.length).toBeGreaterThan(0);
    expect(problems[0]).toMatch(/no replay target/);
  });

  it("reports empty durable lifespans", () => {
    const doc = fresh();
    doc.durable_annotations[0]!.visible_until_ms = doc.durable_annotations[0]!.visible_from_ms;
    expect(auditLinks(doc).some((p) => p.includes("empty lifespan"))).toBe(true);
  });
});

describe("viewer state", () => {
  it("starts on the first focus-event artboard with cursor 0", () => {
    const state = initialState(fresh());
    expect(state.activeArtboard).toBe(fresh().focus_timeline[0]!.artboard);
    expect(state.cursorMs).toBe(0);
    expect(state.problems).toEqual([]);
  });

  it("fragment round-trips artboard and time", () => {
    const state = initialState(fresh());
    state.activeArtboard = "board-live";
    state.cursorMs = 42_000;
    const decoded = decodeFragment(encodeFragment(state));
    expect(decoded.artboard).toBe("board-live");
    expect(decoded.tMs).toBe(42_000);
  });
});
