/** Timestamp-faithful stroke replay.
 *
 * A stroke appears progressively: point i becomes visible after
 * (t_i - t_0) / speed milliseconds, reproducing the original motion
 * dynamics. Laser trails fade out after completion; pencil strokes stay.
 */

import type { GestureReplayRecord, Point } from "./types.js";

export const LASER_FADE_MS = 900;

/** Expected appearance time of each point, ms after replay start. */
export function appearanceTimesMs(points: Point[], speed: number): number[] {
  if (points.length === 0) return [];
  const t0 = points[0]![2];
  return points.map((p) => (p[2] - t0) / speed);
}

export interface ReplayFrame {
  /** points visible at this frame */
  visibleCount: number;
  /** 1 while drawing/holding, falling to 0 during the laser fade */
  opacity: number;
  done: boolean;
}

export class StrokeAnimator {
  private readonly schedule: number[];
  private readonly fades: boolean;
  private startedAt: number | null = null;

  constructor(
    readonly replay: GestureReplayRecord,
    readonly speed: number,
  ) {
    this.schedule = appearanceTimesMs(replay.points, speed);
    this.fades = replay.tool === "laser";
  }

  start(nowMs: number): void {
    this.startedAt = nowMs;
  }

  /** Pure in time: the same `nowMs` always yields the same frame. */
  frame(nowMs: number): ReplayFrame {
    if (this.startedAt === null) return { visibleCount: 0, opacity: 1, done: false };
    const elapsed = nowMs - this.startedAt;
    let visible = 0;
    while (visible < this.schedule.length && this.schedule[visible]! <= elapsed) visible += 1;
    const total = this.schedule.length === 0 ? 0 : this.schedule[this.schedule.length - 1]!;
    if (visible < this.schedule.length) {
      return { visibleCount: visible, opacity: 1, done: false };
    }
    if (!this.fades) return { visibleCount: visible, opacity: 1, done: true };
    const sinceDone = elapsed - total;
    if (sinceDone >= LASER_FADE_MS) return { visibleCount: visible, opacity: 0, done: true };
    return { visibleCount: visible, opacity: 1 - sinceDone / LASER_FADE_MS, done: false };
  }

  /** First frame tick at which every point is visible. */
  totalDrawMs(): number {
    return this.schedule.length === 0 ? 0 : this.schedule[this.schedule.length - 1]!;
  }
}

/** Replay a set of strokes together (merged markers animate all members
 * concurrently, from a shared clock origin). */
export class GroupAnimator {
  readonly animators: StrokeAnimator[];

  constructor(replays: GestureReplayRecord[], speed: number) {
    this.animators = replays.map((r) => new StrokeAnimator(r, speed));
  }

  start(nowMs: number): void {
    for (const a of this.animators) a.start(nowMs);
  }

  frames(nowMs: number): ReplayFrame[] {
    return this.animators.map((a) => a.frame(nowMs));
  }

  done(nowMs: number): boolean {
    return this.frames(nowMs).every((f) => f.done);
  }
}
