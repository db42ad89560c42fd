import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { activeArtboard, activeProvenance, provenanceDisplay, visibleAnnotations } from "../src/timeline.js";
import type { NotesBundle } from "../src/types.js";

const bundle: NotesBundle = JSON.parse(
  readFileSync(new URL("./fixtures/notes.json", import.meta.url), "utf-8"),
);

describe("durable annotation visibility", () => {
  const span = bundle.durable_annotations[0]!;

  it("hidden before the stroke is drawn", () => {
    const t = span.visible_from_ms - 1;
    expect(visibleAnnotations(bundle, t).map((a) => a.gesture)).not.toContain(span.gesture);
  });

  it("visible between draw and erase times", () => {
    const t = Math.floor((span.visible_from_ms + span.visible_until_ms) / 2);
    expect(visibleAnnotations(bundle, t).map((a) => a.gesture)).toContain(span.gesture);
  });

  it("hidden again at visible_until (half-open)", () => {
    expect(visibleAnnotations(bundle, span.visible_until_ms).map((a) => a.gesture)).not.toContain(span.gesture);
    expect(visibleAnnotations(bundle, span.visible_from_ms).map((a) => a.gesture)).toContain(span.gesture);
  });
});

describe("provenance timeline", () => {
  it("no state before the first interaction", () => {
    const first = bundle.provenance_timeline[0]!;
    expect(activeProvenance(bundle, first.t_ms - 1)).toBeNull();
  });

  it("latest state at or before the cursor wins", () => {
    const states = bundle.provenance_timeline;
    const second = states[1]!;
    const active = activeProvenance(bundle, second.t_ms);
    expect(active).not.toBeNull();
    expect(active!.t_ms).toBe(second.t_ms);
    expect(active!.action).toBe(second.action);
  });

  it("renders as a labeled chip when no renderer is registered", () => {
    const state = bundle.provenance_timeline[0]!;
    const display = provenanceDisplay(bundle, state);
    expect(display.mode).toBe("chip");
    expect(display.label).toContain(state.action);
    const withRenderer = provenanceDisplay(bundle, state, new Set(["graph-renderer"]));
    expect(withRenderer.mode).toBe("rendered");
  });
});

describe("focus timeline", () => {
  it("starts on the first focus-event artboard", () => {
    expect(activeArtboard(bundle, 0)!.id).toBe(bundle.focus_timeline[0]!.artboard);
  });

  it("follows switches", () => {
    const later = bundle.focus_timeline[bundle.focus_timeline.length - 1]!;
    expect(activeArtboard(bundle, later.t_ms)!.id).toBe(later.artboard);
    const second = bundle.focus_timeline[1]!;
    expect(activeArtboard(bundle, second.t_ms)!.id).toBe(second.artboard);
    expect(activeArtboard(bundle, second.t_ms - 1)!.id).toBe(bundle.focus_timeline[0]!.artboard);
  });
});
