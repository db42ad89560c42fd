/** Viewer state and shareable URL fragments. The viewer never mutates the
 * bundle: state lives beside it. */

import { auditLinks, validateBundle } from "./audit.js";
import type { NotesBundle } from "./types.js";

export interface ViewerState {
  bundle: NotesBundle;
  activeArtboard: string;
  hoveredLink: string | null;
  pinnedLink: string | null;
  cursorMs: number;
  speed: number;
  problems: string[];
}

export function initialState(doc: unknown): ViewerState {
  const bundle = validateBundle(doc);
  const first = bundle.focus_timeline.length > 0 ? bundle.focus_timeline[0]!.artboard : bundle.artboards[0]?.id;
  if (!first) throw new Error("bundle has no artboards");
  return {
    bundle,
    activeArtboard: first,
    hoveredLink: null,
    pinnedLink: null,
    cursorMs: 0,
    speed: 1,
    problems: auditLinks(bundle),
  };
}

export function clampCursor(state: ViewerState, tMs: number): number {
  return Math.max(0, Math.min(state.bundle.meeting.duration_ms, tMs));
}

/** Fragment encodes (artboard, cursor) so positions are shareable. */
export function encodeFragment(state: ViewerState): string {
  return `#artboard=${encodeURIComponent(state.activeArtboard)}&t=${Math.round(state.cursorMs)}`;
}

export function decodeFragment(fragment: string): { artboard?: string; tMs?: number } {
  const out: { artboard?: string; tMs?: number } = {};
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const artboard = params.get("artboard");
  if (artboard) out.artboard = artboard;
  const t = params.get("t");
  if (t !== null && /^\d+$/.test(t)) out.tMs = parseInt(t, 10);
  return out;
}
