/** Load-time validation: structural checks with path detail, plus the link
 * audit. Broken links are reported, never silently skipped. */

import type { GestureReplayRecord, NotesBundle } from "./types.js";

export class BundleLoadError extends Error {}

const TOP_LEVEL: Array<keyof NotesBundle> = [
  "schema_version",
  "meeting",
  "participants",
  "artboards",
  "focus_timeline",
  "utterances",
  "reference_spans",
  "gesture_replays",
  "durable_annotations",
  "provenance_timeline",
  "minutes",
  "taxonomy",
];

export function validateBundle(doc: unknown): NotesBundle {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new BundleLoadError("bundle root must be an object");
  }
  const record = doc as Record<string, unknown>;
  for (const key of TOP_LEVEL) {
    if (!(key in record)) throw new BundleLoadError(`missing field $.${key}`);
    if (key !== "schema_version" && key !== "meeting" && !Array.isArray(record[key])) {
      throw new BundleLoadError(`field $.${key} must be an array`);
    }
  }
  if (record.schema_version !== "1") {
    throw new BundleLoadError(`unsupported schema_version ${JSON.stringify(record.schema_version)}`);
  }
  const bundle = doc as NotesBundle;
  bundle.gesture_replays.forEach((r, i) => {
    if (!r.points || r.points.length < 1) {
      throw new BundleLoadError(`replay $.gesture_replays[${i}] has no points`);
    }
    r.points.forEach((p, j) => {
      if (p.length !== 3) throw new BundleLoadError(`point $.gesture_replays[${i}].points[${j}] must be [x, y, t]`);
    });
  });
  bundle.artboards.forEach((a, i) => {
    if (a.width <= 0 || a.height <= 0) {
      throw new BundleLoadError(`artboard $.artboards[${i}] has non-positive size`);
    }
  });
  return bundle;
}

/** Resolve a link id to replay records.
 *
 * Three id forms: a match id ("g3.1") names one segment, a gesture id
 * ("g3") names all of that gesture's segments, a merged id ("g1+g2")
 * names every segment of each member gesture.
 */
export function resolveLink(bundle: NotesBundle, linkId: string): GestureReplayRecord[] {
  if (linkId.includes("+")) {
    const members = linkId.split("+");
    return bundle.gesture_replays.filter((r) => members.includes(r.gesture));
  }
  const exact = bundle.gesture_replays.filter((r) => r.id === linkId);
  if (exact.length > 0) return exact;
  return bundle.gesture_replays.filter((r) => r.gesture === linkId);
}

/** Every linked span and minutes marker must resolve; every record's
 * artboard and utterance must exist. Returns human-readable problems. */
export function auditLinks(bundle: NotesBundle): string[] {
  const problems: string[] = [];
  const artboards = new Set(bundle.artboards.map((a) => a.id));
  const utterances = new Set(bundle.utterances.map((u) => u.id));

  for (const span of bundle.reference_spans) {
    if (resolveLink(bundle, span.id).length === 0) {
      problems.push(`reference span ${span.id} has no replay target`);
    }
    if (!utterances.has(span.utterance)) {
      problems.push(`reference span ${span.id} names unknown utterance ${span.utterance}`);
    }
  }
  for (const block of bundle.minutes) {
    for (const marker of block.markers) {
      for (const gid of marker) {
        if (resolveLink(bundle, gid).length === 0) {
          problems.push(`minutes marker ${gid} in ${block.segment} has no replay target`);
        }
      }
    }
  }
  for (const r of bundle.gesture_replays) {
    if (!artboards.has(r.artboard)) problems.push(`replay ${r.id} names unknown artboard ${r.artboard}`);
  }
  for (const a of bundle.durable_annotations) {
    if (!artboards.has(a.artboard)) problems.push(`annotation ${a.gesture} names unknown artboard ${a.artboard}`);
    if (a.visible_from_ms >= a.visible_until_ms) {
      problems.push(`annotation ${a.gesture} has an empty lifespan`);
    }
  }
  for (const s of bundle.provenance_timeline) {
    if (!artboards.has(s.artboard)) problems.push(`provenance state at ${s.t_ms} names unknown artboard`);
  }
  for (const f of bundle.focus_timeline) {
    if (!artboards.has(f.artboard)) problems.push(`focus event at ${f.t_ms} names unknown artboard`);
  }
  return problems;
}
