/** Shape of notes.json (bundle schema version 1). */

export type Point = [number, number, number]; // x, y normalized; t in ms

export interface Meeting {
  meeting_id: string;
  started_at: string;
  duration_ms: number;
}

export interface Participant {
  id: string;
  display_name: string;
  color: string;
}

export interface ArtboardRecord {
  id: string;
  kind: "static" | "interactive";
  width: number;
  height: number;
  asset?: string;
  source?: string;
  renderer?: string;
}

export interface FocusEvent {
  t_ms: number;
  artboard: string;
}

export interface WordRecord {
  text: string;
  start_ms: number;
  end_ms: number;
}

export interface UtteranceRecord {
  id: string;
  speaker: string;
  speaker_name: string;
  start_ms: number;
  end_ms: number;
  text: string;
  words: WordRecord[];
}

export interface ReferenceSpanRecord {
  id: string;
  utterance: string;
  gesture: string;
  word_start: number;
  word_end: number;
  source: "llm" | "heuristic" | "whole_sentence";
}

export interface GestureReplayRecord {
  id: string;
  gesture: string;
  segment_index: number;
  artboard: string;
  author: string;
  author_name: string;
  color: string;
  tool: "laser" | "pencil";
  points: Point[];
  interpolated: boolean[];
  start_ms: number;
  end_ms: number;
}

export interface DurableAnnotationRecord {
  gesture: string;
  artboard: string;
  author: string;
  author_name: string;
  color: string;
  points: Point[];
  visible_from_ms: number;
  visible_until_ms: number;
}

export interface ProvenanceRecord {
  t_ms: number;
  user: string;
  user_name: string;
  artboard: string;
  action: string;
  state: Record<string, unknown>;
}

export interface MinutesBlockRecord {
  segment: string;
  time_label: string;
  text: string;
  markers: string[][];
}

export interface TaxonomyRecord {
  gesture: string;
  shape: string;
  intentions: string[];
}

export interface NotesBundle {
  schema_version: string;
  meeting: Meeting;
  participants: Participant[];
  artboards: ArtboardRecord[];
  focus_timeline: FocusEvent[];
  utterances: UtteranceRecord[];
  reference_spans: ReferenceSpanRecord[];
  gesture_replays: GestureReplayRecord[];
  durable_annotations: DurableAnnotationRecord[];
  provenance_timeline: ProvenanceRecord[];
  minutes: MinutesBlockRecord[];
  taxonomy: TaxonomyRecord[];
}
