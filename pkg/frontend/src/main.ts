/** Bootstrap: fetch the bundle directory named by ?bundle= (default
 * "../demo_out") and mount the viewer. */

import { BundleLoadError } from "./audit.js";
import { decodeFragment, initialState } from "./state.js";
import { Viewer } from "./viewer.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const params = new URLSearchParams(window.location.search);
  const dir = params.get("bundle") ?? "../demo_out";
  let doc: unknown;
  try {
    const resp = await fetch(`${dir}/notes.json`);
    if (!resp.ok) throw new BundleLoadError(`could not load ${dir}/notes.json (HTTP ${resp.status})`);
    doc = await resp.json();
  } catch (e) {
    root.textContent = `bundle load failed: ${e instanceof Error ? e.message : e}`;
    return;
  }
  let state;
  try {
    state = initialState(doc);
  } catch (e) {
    root.textContent = `bundle rejected: ${e instanceof Error ? e.message : e}`;
    return;
  }
  const fragment = decodeFragment(window.location.hash);
  if (fragment.artboard) state.activeArtboard = fragment.artboard;
  const viewer = new Viewer(root, state, dir);
  if (fragment.tMs !== undefined) viewer.seek(fragment.tMs);
}

void boot();
