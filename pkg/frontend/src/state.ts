/**
 * Session state: parameter values, append-only run history, active layer,
 * pinned comparison run. At most one detect request is in flight; layer
 * switches never trigger recomputation.
 */

import type { DetectResponse, Layer } from "./apiClient.js";

export interface RunRecord {
  runId: string;
  params: Record<string, unknown>;
  stats: Record<string, number | null>;
  timings: Record<string, number>;
  cacheHit: boolean;
  startedAt: number;
}

export interface ImageSource {
  kind: "upload" | "phantom";
  label: string;
  blob?: Blob;
  imageRef?: string;
}

export class SessionStore {
  values: Record<string, unknown>;
  mode: "edge" | "ridge" = "edge";
  image: ImageSource | null = null;
  activeLayer: Layer = "overlay";
  pinnedRunId: string | null = null;
  private history_: RunRecord[] = [];
  private inFlight_ = false;

  constructor(defaults: Record<string, unknown>,
              private storage: Storage | null = null,
              private storageKey = "coshrem-tuner") {
    this.values = { ...defaults, ...this.loadStoredValues() };
  }

  get history(): readonly RunRecord[] {
    return this.history_;
  }

  get inFlight(): boolean {
    return this.inFlight_;
  }

  get lastRun(): RunRecord | null {
    return this.history_.length ? this.history_[this.history_.length - 1] : null;
  }

  setValue(name: string, value: unknown): void {
    this.values[name] = value;
    this.persistValues();
  }

  setLayer(layer: Layer): void {
    this.activeLayer = layer;
  }

  pin(runId: string | null): void {
    this.pinnedRunId = runId;
  }

  findRun(runId: string): RunRecord | null {
    return this.history_.find((r) => r.runId === runId) ?? null;
  }

  /** Returns false when a detect call is already running. */
  beginDetect(): boolean {
    if (this.inFlight_) return false;
    this.inFlight_ = true;
    return true;
  }

  /** Appends to history (append-only; existing records never change). */
  completeDetect(resp: DetectResponse, params: Record<string, unknown>,
                 startedAt: number): RunRecord {
    const record: RunRecord = {
      runId: resp.runId,
      params,
      stats: resp.stats,
      timings: resp.timings,
      cacheHit: resp.cacheHit,
      startedAt,
    };
    this.history_.push(record);
    this.inFlight_ = false;
    return record;
  }

  /** A failed request leaves the history untouched. */
  failDetect(): void {
    this.inFlight_ = false;
  }

  private loadStoredValues(): Record<string, unknown> {
    if (!this.storage) return {};
    try {
      const raw = this.storage.getItem(this.storageKey);
      return raw ? (JSON.parse(raw) as Record<string, unknown>) : {};
    } catch {
      return {};
    }
  }

  private persistValues(): void {
    if (!this.storage) return;
    try {
      this.storage.setItem(this.storageKey, JSON.stringify(this.values));
    } catch {
      // session storage may be unavailable; values stay in memory
    }
  }
}
