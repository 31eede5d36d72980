/** Wires the tuning UI: schema-driven controls, detection runs, layer
 * toggles fetching rendered PNGs, run history and pinned-run comparison
 * with a shared pan/zoom viewport. */

import { ApiClient, ApiError, LAYERS, type Layer } from "./apiClient.js";
import { renderControls } from "./controls.js";
import { buildDetectParams, defaultsOf, sanitizeSchema } from "./schema.js";
import { SessionStore, type RunRecord } from "./state.js";
import { bindPanZoom, cssTransform, initialViewport, type Viewport } from "./viewer.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const status = el<HTMLElement>("status");
  let schemaRaw: unknown;
  try {
    schemaRaw = await api.schema();
  } catch (err) {
    status.textContent = "service unreachable - retry";
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => location.reload());
    status.appendChild(retry);
    return;
  }
  const { entries, warnings } = sanitizeSchema(schemaRaw);
  if (warnings.length) {
    status.textContent = warnings.join("; ");
  }

  const session = new SessionStore(defaultsOf(entries),
                                   globalThis.sessionStorage ?? null);
  const runButton = el<HTMLButtonElement>("run");
  renderControls(el("controls"), entries, session,
                 (ok) => { runButton.disabled = !ok || session.inFlight; });

  const modeSelect = el<HTMLSelectElement>("mode");
  modeSelect.addEventListener("change", () => {
    session.mode = modeSelect.value as "edge" | "ridge";
  });

  const fileInput = el<HTMLInputElement>("file");
  fileInput.addEventListener("change", () => {
    const f = fileInput.files?.[0];
    if (f) {
      session.image = { kind: "upload", label: f.name, blob: f };
      status.textContent = `image: ${f.name}`;
    }
  });

  el<HTMLButtonElement>("phantom").addEventListener("click", async () => {
    const name = el<HTMLSelectElement>("phantom-name").value;
    const noise = Number(el<HTMLInputElement>("phantom-noise").value) || 0;
    try {
      const resp = await api.phantom({ standard: name, noise, seed: 7 });
      session.image = { kind: "phantom", label: name, imageRef: resp.runId };
      status.textContent =
        `phantom ${name} (${resp.width}x${resp.height}, noise ${noise})`;
    } catch (err) {
      status.textContent = describeError(err);
    }
  });

  // shared viewport across the main and pinned panes
  const paneA = el<HTMLElement>("pane-a");
  const paneB = el<HTMLElement>("pane-b");
  const imgA = el<HTMLImageElement>("img-a");
  const imgB = el<HTMLImageElement>("img-b");
  const applyViewport = (vp: Viewport) => {
    imgA.style.transform = cssTransform(vp);
    imgB.style.transform = cssTransform(vp);
  };
  bindPanZoom([paneA, paneB], applyViewport, initialViewport());

  const showLayer = () => {
    const run = session.lastRun;
    if (run) imgA.src = api.layerUrl(run.runId, session.activeLayer);
    const pinned = session.pinnedRunId ? session.findRun(session.pinnedRunId) : null;
    paneB.style.display = pinned ? "block" : "none";
    if (pinned) imgB.src = api.layerUrl(pinned.runId, session.activeLayer);
  };

  const layerBar = el<HTMLElement>("layers");
  for (const layer of LAYERS) {
    const btn = document.createElement("button");
    btn.textContent = layer;
    btn.addEventListener("click", () => {
      session.setLayer(layer as Layer);  // a plain image fetch, no re-detect
      showLayer();
    });
    layerBar.appendChild(btn);
  }

  const historyList = el<HTMLElement>("history");
  const renderHistory = () => {
    historyList.textContent = "";
    for (const run of [...session.history].reverse()) {
      historyList.appendChild(historyRow(run));
    }
  };

  const historyRow = (run: RunRecord): HTMLElement => {
    const row = document.createElement("div");
    row.className = "run";
    const ms = run.timings["totalMs"] ?? 0;
    row.textContent = `${run.runId} · ${run.stats["onPixels"]} px · ` +
      `${ms.toFixed(0)} ms${run.cacheHit ? " · cached" : ""}`;
    const pin = document.createElement("button");
    pin.textContent = session.pinnedRunId === run.runId ? "unpin" : "pin";
    pin.addEventListener("click", () => {
      session.pin(session.pinnedRunId === run.runId ? null : run.runId);
      renderHistory();
      showLayer();
    });
    row.appendChild(pin);
    return row;
  };

  runButton.addEventListener("click", async () => {
    if (!session.image) {
      status.textContent = "select an image or phantom first";
      return;
    }
    if (!session.beginDetect()) return;  // one request in flight at a time
    runButton.disabled = true;
    status.textContent = "running...";
    const startedAt = Date.now();
    try {
      const params = buildDetectParams(entries, session.values, session.mode,
                                       session.image.imageRef);
      const resp = await api.detect(params, session.image.blob ?? null,
                                    session.image.label);
      session.completeDetect(resp, params, startedAt);
      status.textContent = `run ${resp.runId}: ${resp.stats["onPixels"]} px, ` +
        `${resp.timings["totalMs"]} ms${resp.cacheHit ? " (system cached)" : ""}`;
      renderHistory();
      showLayer();
    } catch (err) {
      session.failDetect();  // history stays as it was
      status.textContent = describeError(err);
    } finally {
      runButton.disabled = false;
    }
  });
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    const field = err.body.field ? ` (${err.body.field})` : "";
    return `error ${err.body.code}${field}: ${err.body.message}`;
  }
  return String(err);
}

boot();
