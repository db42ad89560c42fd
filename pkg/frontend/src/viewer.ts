/** DOM wiring: render the two-pane document and drive replays.
 *
 * Left: minutes and transcript with hover-linked spans. Right: gallery and
 * the active artboard with a canvas overlay for replayed strokes, durable
 * annotations, and the timeline scrubber. Hover starts a replay, mouse-out
 * cancels, click pins it as a loop.
 */

import { resolveLink } from "./audit.js";
import { GroupAnimator, LASER_FADE_MS } from "./replay.js";
import { clampCursor, encodeFragment, ViewerState } from "./state.js";
import { activeArtboard, activeProvenance, provenanceDisplay, visibleAnnotations } from "./timeline.js";
import type { GestureReplayRecord, NotesBundle, UtteranceRecord } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(tag: K, cls?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  return node;
}

function fmtMmss(tMs: number): string {
  const total = Math.max(0, Math.floor(tMs / 1000));
  const m = Math.floor(total / 60);
  const s = total % 60;
  return `${String(m).padStart(2, "0")}:${String(s).padStart(2, "0")}`;
}

const MARKER_RE = /⟦([^⟧]+)⟧/g;

export class Viewer {
  private state: ViewerState;
  private readonly root: HTMLElement;
  private readonly bundleDir: string;
  private board!: HTMLElement;
  private boardImg!: HTMLImageElement;
  private boardChip!: HTMLElement;
  private overlay!: HTMLCanvasElement;
  private scrubber!: HTMLInputElement;
  private timeLabel!: HTMLElement;
  private provChip!: HTMLElement;
  private animator: GroupAnimator | null = null;
  private animating = false;

  constructor(root: HTMLElement, state: ViewerState, bundleDir: string) {
    this.root = root;
    this.state = state;
    this.bundleDir = bundleDir;
    this.render();
    this.seek(state.cursorMs);
  }

  private get bundle(): NotesBundle {
    return this.state.bundle;
  }

  private render(): void {
    this.root.replaceChildren();
    if (this.state.problems.length > 0) {
      const banner = el("div", "problems");
      banner.textContent = `link audit: ${this.state.problems.length} problem(s) - ${this.state.problems.join("; ")}`;
      this.root.appendChild(banner);
    }
    const layout = el("div", "layout");
    layout.appendChild(this.renderTextPane());
    layout.appendChild(this.renderBoardPane());
    this.root.appendChild(layout);
  }

  private linkSpan(id: string, text: string): HTMLElement {
    const span = el("span", "gesture-link");
    span.textContent = text;
    span.dataset["link"] = id;
    const targets = resolveLink(this.bundle, id);
    if (targets.length === 0) span.classList.add("broken");
    span.addEventListener("mouseenter", () => this.startReplay(id, false));
    span.addEventListener("mouseleave", () => {
      if (this.state.pinnedLink !== id) this.cancelReplay(id);
    });
    span.addEventListener("click", () => this.togglePin(id));
    return span;
  }

  private renderMinutesText(container: HTMLElement, text: string): void {
    let last = 0;
    for (const match of text.matchAll(MARKER_RE)) {
      container.appendChild(document.createTextNode(text.slice(last, match.index)));
      container.appendChild(this.linkSpan(match[1]!, match[1]!));
      last = match.index! + match[0].length;
    }
    container.appendChild(document.createTextNode(text.slice(last)));
  }

  private renderUtterance(u: UtteranceRecord): HTMLElement {
    const line = el("div", "utterance");
    const head = el("span", "speaker");
    head.textContent = `${u.speaker_name} @${fmtMmss(u.start_ms)}: `;
    const color = this.bundle.participants.find((p) => p.id === u.speaker)?.color;
    if (color) head.style.color = color;
    line.appendChild(head);
    const spans = this.bundle.reference_spans
      .filter((s) => s.utterance === u.id && s.word_end - s.word_start < u.words.length)
      .sort((a, b) => a.word_start - b.word_start);
    const chips = this.bundle.reference_spans.filter(
      (s) => s.utterance === u.id && s.word_end - s.word_start >= u.words.length,
    );
    const tokens = u.words.map((w) => w.text);
    let i = 0;
    for (const s of spans) {
      if (s.word_start < i) {
        chips.push(s);
        continue;
      }
      if (s.word_start > i) line.appendChild(document.createTextNode(tokens.slice(i, s.word_start).join(" ") + " "));
      this.renderLinkWords(line, s.id, tokens.slice(s.word_start, s.word_end).join(" "));
      line.appendChild(document.createTextNode(" "));
      i = s.word_end;
    }
    if (i < tokens.length) line.appendChild(document.createTextNode(tokens.slice(i).join(" ")));
    for (const s of chips) {
      line.appendChild(document.createTextNode(" "));
      this.renderLinkWords(line, s.id, "↩");
    }
    return line;
  }

  private renderLinkWords(parent: HTMLElement, id: string, text: string): void {
    parent.appendChild(this.linkSpan(id, text));
  }

  private renderTextPane(): HTMLElement {
    const pane = el("div", "text-pane");
    const minutesHead = el("h2");
    minutesHead.textContent = "Minutes";
    pane.appendChild(minutesHead);
    for (const block of this.bundle.minutes) {
      const blockEl = el("div", "minutes-block");
      const label = el("div", "time-label");
      label.textContent = block.time_label;
      blockEl.appendChild(label);
      const body = el("div");
      this.renderMinutesText(body, block.text);
      blockEl.appendChild(body);
      pane.appendChild(blockEl);
    }
    const transcriptHead = el("h2");
    transcriptHead.textContent = "Transcript";
    pane.appendChild(transcriptHead);
    for (const u of this.bundle.utterances) pane.appendChild(this.renderUtterance(u));
    return pane;
  }

  private renderBoardPane(): HTMLElement {
    const pane = el("div", "board-pane");
    const gallery = el("div", "gallery");
    for (const a of this.bundle.artboards) {
      const thumb = el("button", "thumb");
      thumb.textContent = a.id;
      thumb.dataset["artboard"] = a.id;
      thumb.addEventListener("click", () => this.switchArtboard(a.id));
      gallery.appendChild(thumb);
    }
    pane.appendChild(gallery);

    this.board = el("div", "board");
    this.boardImg = el("img", "board-img");
    this.boardImg.alt = "artboard";
    this.boardChip = el("div", "board-chip");
    this.overlay = el("canvas", "overlay");
    this.board.appendChild(this.boardImg);
    this.board.appendChild(this.boardChip);
    this.board.appendChild(this.overlay);
    pane.appendChild(this.board);

    const controls = el("div", "controls");
    this.scrubber = el("input");
    this.scrubber.type = "range";
    this.scrubber.min = "0";
    this.scrubber.max = String(this.bundle.meeting.duration_ms);
    this.scrubber.value = "0";
    this.scrubber.addEventListener("input", () => this.seek(parseInt(this.scrubber.value, 10)));
    this.timeLabel = el("span", "time-label");
    const speed = el("select");
    for (const v of ["0.5", "1", "2"]) {
      const opt = el("option");
      opt.value = v;
      opt.textContent = `${v}x`;
      if (v === "1") opt.selected = true;
      speed.appendChild(opt);
    }
    speed.addEventListener("change", () => {
      this.state.speed = parseFloat(speed.value);
    });
    controls.appendChild(this.scrubber);
    controls.appendChild(this.timeLabel);
    controls.appendChild(speed);
    this.provChip = el("div", "prov-chip");
    controls.appendChild(this.provChip);
    pane.appendChild(controls);
    this.applyArtboard(this.state.activeArtboard);
    return pane;
  }

  private switchArtboard(id: string): void {
    this.state.activeArtboard = id;
    this.applyArtboard(id);
    this.pushFragment();
    this.drawStatic();
  }

  private applyArtboard(id: string): void {
    const board = this.bundle.artboards.find((a) => a.id === id);
    if (!board) return;
    this.root.querySelectorAll<HTMLElement>(".thumb").forEach((t) => {
      t.classList.toggle("active", t.dataset["artboard"] === id);
    });
    if (board.asset) {
      this.boardImg.src = `${this.bundleDir}/${board.asset}`;
      this.boardImg.style.display = "block";
      this.boardChip.style.display = "none";
    } else {
      this.boardImg.style.display = "none";
      this.boardChip.style.display = "flex";
      this.boardChip.textContent = `interactive: ${board.renderer ?? board.id}`;
    }
    this.overlay.width = 960;
    this.overlay.height = Math.round((960 * board.height) / board.width);
  }

  /** Timeline semantics: annotations alive at t, latest provenance state,
   * artboard follows the focus timeline. */
  seek(tMs: number): void {
    const t = clampCursor(this.state, tMs);
    this.state.cursorMs = t;
    this.scrubber.value = String(t);
    this.timeLabel.textContent = fmtMmss(t);
    const focused = activeArtboard(this.bundle, t);
    if (focused && focused.id !== this.state.activeArtboard) {
      this.state.activeArtboard = focused.id;
      this.applyArtboard(focused.id);
    }
    const state = activeProvenance(this.bundle, t);
    if (state) {
      const display = provenanceDisplay(this.bundle, state);
      this.provChip.textContent = `▣ ${display.label} @${fmtMmss(state.t_ms)}`;
      this.provChip.style.display = "inline-block";
    } else {
      this.provChip.style.display = "none";
    }
    this.pushFragment();
    this.drawStatic();
  }

  /** Hover/pin entry: merged links animate every member stroke together;
   * the owning artboard is switched in if needed. */
  startReplay(linkId: string, pinned: boolean): void {
    const targets = resolveLink(this.bundle, linkId);
    if (targets.length === 0) return;
    const first = targets[0]!;
    if (first.artboard !== this.state.activeArtboard) {
      this.switchArtboard(first.artboard);
    }
    this.state.hoveredLink = linkId;
    if (pinned) this.state.pinnedLink = linkId;
    this.animator = new GroupAnimator(targets, this.state.speed);
    this.animator.start(performance.now());
    if (!this.animating) {
      this.animating = true;
      requestAnimationFrame((now) => this.tick(now));
    }
  }

  cancelReplay(linkId: string): void {
    if (this.state.hoveredLink === linkId) {
      this.state.hoveredLink = null;
      if (this.state.pinnedLink !== linkId) {
        this.animator = null;
        this.drawStatic();
      }
    }
  }

  private togglePin(linkId: string): void {
    if (this.state.pinnedLink === linkId) {
      this.state.pinnedLink = null;
      this.animator = null;
      this.drawStatic();
    } else {
      this.state.pinnedLink = linkId;
      this.startReplay(linkId, true);
    }
  }

  private tick(now: number): void {
    if (!this.animator) {
      this.animating = false;
      return;
    }
    this.drawStatic();
    const ctx = this.overlay.getContext("2d")!;
    const frames = this.animator.frames(now);
    this.animator.animators.forEach((a, i) => {
      const frame = frames[i]!;
      this.drawStroke(ctx, a.replay, frame.visibleCount, frame.opacity, true);
    });
    if (this.animator.done(now) && this.state.pinnedLink) {
      this.animator.start(now + LASER_FADE_MS / 2); // pinned replays loop
    }
    requestAnimationFrame((n) => this.tick(n));
  }

  /** Durable annotations alive at the cursor, drawn beneath replays. */
  private drawStatic(): void {
    const ctx = this.overlay.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.overlay.width, this.overlay.height);
    for (const a of visibleAnnotations(this.bundle, this.state.cursorMs)) {
      if (a.artboard !== this.state.activeArtboard) continue;
      this.drawStroke(ctx, a, a.points.length, 0.9, false);
    }
  }

  private drawStroke(
    ctx: CanvasRenderingContext2D,
    stroke: { points: [number, number, number][]; color: string; author_name?: string },
    visibleCount: number,
    opacity: number,
    label: boolean,
  ): void {
    if (visibleCount < 1 || opacity <= 0) return;
    const w = this.overlay.width;
    const h = this.overlay.height;
    ctx.save();
    ctx.globalAlpha = opacity;
    ctx.strokeStyle = stroke.color;
    ctx.lineWidth = 3;
    ctx.lineJoin = "round";
    ctx.lineCap = "round";
    ctx.beginPath();
    stroke.points.slice(0, visibleCount).forEach((p, i) => {
      const x = p[0] * w;
      const y = p[1] * h;
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
    const head = stroke.points[Math.max(0, visibleCount - 1)]!;
    if (label && stroke.author_name) {
      ctx.font = "13px sans-serif";
      ctx.fillStyle = stroke.color;
      ctx.fillText(stroke.author_name, head[0] * w + 8, head[1] * h - 8);
    }
    ctx.restore();
  }

  private pushFragment(): void {
    history.replaceState(null, "", encodeFragment(this.state));
  }
}
