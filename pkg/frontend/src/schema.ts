/**
 * Schema handling: sanitize what the service sends, validate user values
 * against it (the client never sends out-of-range values), and assemble the
 * nested params object for /api/detect.
 */

import type { ParamSchemaEntry } from "./apiClient.js";

const GROUPS = new Set(["system", "detection", "postprocess"]);
const TYPES = new Set(["float", "int", "intlist", "enum"]);

export interface SanitizedSchema {
  entries: ParamSchemaEntry[];
  warnings: string[];
}

/** Drop malformed entries instead of failing; report them as warnings. */
export function sanitizeSchema(raw: unknown): SanitizedSchema {
  const entries: ParamSchemaEntry[] = [];
  const warnings: string[] = [];
  const params = (raw as { parameters?: unknown })?.parameters;
  if (!Array.isArray(params)) {
    return { entries, warnings: ["schema has no parameters array"] };
  }
  for (const item of params) {
    const e = item as Partial<ParamSchemaEntry>;
    const name = typeof e.name === "string" ? e.name : "<unnamed>";
    if (!e.name || !GROUPS.has(e.group ?? "") || !TYPES.has(e.type ?? "")) {
      warnings.push(`ignoring malformed schema entry ${name}`);
      continue;
    }
    if (e.type === "enum" && !Array.isArray(e.choices)) {
      warnings.push(`ignoring enum ${name} without choices`);
      continue;
    }
    if (e.type !== "enum" &&
        (typeof e.min !== "number" || typeof e.max !== "number")) {
      warnings.push(`ignoring ${name} without numeric range`);
      continue;
    }
    if (e.default === undefined) {
      warnings.push(`ignoring ${name} without a default`);
      continue;
    }
    entries.push(e as ParamSchemaEntry);
  }
  return { entries, warnings };
}

export function defaultsOf(entries: ParamSchemaEntry[]): Record<string, unknown> {
  const out: Record<string, unknown> = {};
  for (const e of entries) out[e.name] = e.default;
  return out;
}

export function groupEntries(
  entries: ParamSchemaEntry[],
): Map<string, ParamSchemaEntry[]> {
  const out = new Map<string, ParamSchemaEntry[]>();
  for (const e of entries) {
    const list = out.get(e.group) ?? [];
    list.push(e);
    out.set(e.group, list);
  }
  return out;
}

/** Returns an error message, or null when the value is sendable. */
export function validateValue(entry: ParamSchemaEntry, value: unknown): string | null {
  switch (entry.type) {
    case "enum":
      return entry.choices!.includes(value as string)
        ? null
        : `${entry.name} must be one of ${entry.choices!.join(", ")}`;
    case "intlist": {
      if (!Array.isArray(value) || value.length === 0) {
        return `${entry.name} must be a nonempty list of integers`;
      }
      for (const v of value) {
        if (!Number.isInteger(v)) return `${entry.name} entries must be integers`;
        if ((v as number) < entry.min! || (v as number) > entry.max!) {
          return `${entry.name} entries must lie in [${entry.min}, ${entry.max}]`;
        }
      }
      return null;
    }
    default: {
      if (typeof value !== "number" || Number.isNaN(value)) {
        return `${entry.name} must be a number`;
      }
      if (entry.type === "int" && !Number.isInteger(value)) {
        return `${entry.name} must be an integer`;
      }
      if (value < entry.min! || value > entry.max!) {
        return `${entry.name} must lie in [${entry.min}, ${entry.max}]`;
      }
      return null;
    }
  }
}

export function validateAll(
  entries: ParamSchemaEntry[],
  values: Record<string, unknown>,
): string[] {
  const errors: string[] = [];
  for (const e of entries) {
    const err = validateValue(e, values[e.name] ?? e.default);
    if (err) errors.push(err);
  }
  return errors;
}

/** Parse "0,1,2" into an int list (for text controls). */
export function parseIntList(text: string): number[] | null {
  const parts = text.split(",").map((t) => t.trim()).filter((t) => t.length);
  if (!parts.length) return null;
  const out: number[] = [];
  for (const p of parts) {
    const v = Number(p);
    if (!Number.isInteger(v)) return null;
    out.push(v);
  }
  return out;
}

/**
 * Assemble the nested request body for /api/detect. Throws if any value is
 * out of range - invalid values are unsendable by construction.
 */
export function buildDetectParams(
  entries: ParamSchemaEntry[],
  values: Record<string, unknown>,
  mode: "edge" | "ridge",
  imageRef?: string,
): Record<string, unknown> {
  const errors = validateAll(entries, values);
  if (errors.length) {
    throw new Error("refusing to send invalid parameters: " + errors.join("; "));
  }
  const nested: Record<string, Record<string, unknown>> = {
    system: {},
    detection: {},
    thresholds: {},
  };
  const groupKey: Record<string, keyof typeof nested> = {
    system: "system",
    detection: "detection",
    postprocess: "thresholds",
  };
  for (const e of entries) {
    nested[groupKey[e.group]][e.name] = values[e.name] ?? e.default;
  }
  const body: Record<string, unknown> = { mode, ...nested };
  if (imageRef) body.imageRef = imageRef;
  return body;
}
