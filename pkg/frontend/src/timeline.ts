/** Timeline semantics: what is visible at cursor time t. */

import type {
  ArtboardRecord,
  DurableAnnotationRecord,
  NotesBundle,
  ProvenanceRecord,
} from "./types.js";

/** Durable annotations alive at t: visible_from <= t < visible_until. */
export function visibleAnnotations(bundle: NotesBundle, tMs: number): DurableAnnotationRecord[] {
  return bundle.durable_annotations.filter((a) => a.visible_from_ms <= tMs && tMs < a.visible_until_ms);
}

/** Latest provenance state at or before t, if any. */
export function activeProvenance(bundle: NotesBundle, tMs: number): ProvenanceRecord | null {
  let latest: ProvenanceRecord | null = null;
  for (const s of bundle.provenance_timeline) {
    if (s.t_ms <= tMs) latest = s;
    else break;
  }
  return latest;
}

/** Artboard selected by the focus timeline at t (first artboard fallback). */
export function activeArtboard(bundle: NotesBundle, tMs: number): ArtboardRecord | null {
  let current: string | null = null;
  for (const f of bundle.focus_timeline) {
    if (f.t_ms <= tMs) current = f.artboard;
    else break;
  }
  if (current === null) {
    return bundle.artboards.length > 0 ? bundle.artboards[0]! : null;
  }
  return bundle.artboards.find((a) => a.id === current) ?? null;
}

/** A provenance state renders only when the viewer has a renderer for the
 * artboard kind; otherwise it shows as a labeled chip. */
export function provenanceDisplay(
  bundle: NotesBundle,
  state: ProvenanceRecord,
  renderers: Set<string> = new Set(),
): { mode: "rendered" | "chip"; label: string } {
  const board = bundle.artboards.find((a) => a.id === state.artboard);
  const renderer = board?.renderer;
  if (renderer && renderers.has(renderer)) {
    return { mode: "rendered", label: state.action };
  }
  return { mode: "chip", label: `${state.user_name}: ${state.action}` };
}
