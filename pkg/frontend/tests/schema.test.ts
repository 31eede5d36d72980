import { describe, expect, it } from "vitest";

import type { ParamSchemaEntry } from "../src/apiClient.js";
import {
  buildDetectParams, defaultsOf, groupEntries, parseIntList, sanitizeSchema,
  validateAll, validateValue,
} from "../src/schema.js";

const SCHEMA: ParamSchemaEntry[] = [
  { name: "waveletSupport", group: "system", type: "float", min: 8, max: 200, default: 60 },
  { name: "gaussianSupport", group: "system", type: "float", min: 4, max: 120, default: 28 },
  { name: "scalesPerOctave", group: "system", type: "int", min: 1, max: 6, default: 2 },
  { name: "octaves", group: "system", type: "float", min: 0.5, max: 6, default: 2.5 },
  { name: "shearLevel", group: "system", type: "int", min: 0, max: 4, default: 3 },
  { name: "alpha", group: "system", type: "float", min: 0, max: 1, default: 0.7 },
  { name: "minContrast", group: "detection", type: "float", min: 0.5, max: 255, default: 85 },
  { name: "epsilonFactor", group: "detection", type: "float", min: 0.001, max: 10, default: 0.1 },
  { name: "pivotScales", group: "detection", type: "intlist", min: 0, max: 15, default: [0, 1, 2] },
  { name: "polarity", group: "detection", type: "enum", choices: ["positive", "negative", "both"], default: "both" },
  { name: "lowThreshold", group: "postprocess", type: "float", min: 0, max: 1, default: 0.3 },
  { name: "highThreshold", group: "postprocess", type: "float", min: 0, max: 1, default: 0.5 },
];

describe("sanitizeSchema", () => {
  it("keeps twelve well-formed entries in three groups", () => {
    const { entries, warnings } = sanitizeSchema({ parameters: SCHEMA });
    expect(entries).toHaveLength(12);
    expect(warnings).toHaveLength(0);
    const groups = groupEntries(entries);
    expect(groups.get("system")).toHaveLength(6);
    expect(groups.get("detection")).toHaveLength(4);
    expect(groups.get("postprocess")).toHaveLength(2);
  });

  it("omits malformed entries with a warning", () => {
    const raw = {
      parameters: [
        ...SCHEMA,
        { name: "broken", group: "system", type: "float", default: 1 }, // no range
        { group: "system", type: "float", min: 0, max: 1, default: 0 }, // no name
        { name: "badenum", group: "detection", type: "enum", default: "x" },
      ],
    };
    const { entries, warnings } = sanitizeSchema(raw);
    expect(entries).toHaveLength(12);
    expect(warnings).toHaveLength(3);
    expect(warnings[0]).toContain("broken");
  });

  it("tolerates a completely malformed payload", () => {
    expect(sanitizeSchema(null).entries).toHaveLength(0);
    expect(sanitizeSchema({}).warnings[0]).toContain("no parameters");
  });
});

describe("validation", () => {
  const alpha = SCHEMA[5];
  const pivot = SCHEMA[8];
  const polarity = SCHEMA[9];

  it("accepts in-range values", () => {
    expect(validateValue(alpha, 0.5)).toBeNull();
    expect(validateValue(pivot, [0, 3])).toBeNull();
    expect(validateValue(polarity, "both")).toBeNull();
  });

  it("rejects out-of-range and ill-typed values", () => {
    expect(validateValue(alpha, 1.5)).toContain("alpha");
    expect(validateValue(alpha, "x")).toContain("number");
    expect(validateValue(SCHEMA[2], 2.5)).toContain("integer");
    expect(validateValue(pivot, [])).toContain("nonempty");
    expect(validateValue(pivot, [99])).toContain("lie in");
    expect(validateValue(polarity, "sideways")).toContain("one of");
  });

  it("validateAll reports every offending field", () => {
    const values = { ...defaultsOf(SCHEMA), alpha: 7, minContrast: -1 };
    const errors = validateAll(SCHEMA, values);
    expect(errors).toHaveLength(2);
  });
});

describe("parseIntList", () => {
  it("parses comma-separated integers", () => {
    expect(parseIntList("0, 1,2")).toEqual([0, 1, 2]);
    expect(parseIntList("")).toBeNull();
    expect(parseIntList("1,x")).toBeNull();
    expect(parseIntList("1.5")).toBeNull();
  });
});

describe("buildDetectParams", () => {
  it("nests values by group and carries mode + imageRef", () => {
    const body = buildDetectParams(SCHEMA, defaultsOf(SCHEMA), "ridge", "abc123");
    expect(body.mode).toBe("ridge");
    expect(body.imageRef).toBe("abc123");
    expect((body.system as Record<string, unknown>).alpha).toBe(0.7);
    expect((body.detection as Record<string, unknown>).pivotScales).toEqual([0, 1, 2]);
    expect((body.thresholds as Record<string, unknown>).lowThreshold).toBe(0.3);
  });

  it("refuses to build a request from out-of-range values", () => {
    const values = { ...defaultsOf(SCHEMA), alpha: 2.0 };
    expect(() => buildDetectParams(SCHEMA, values, "edge")).toThrow(/alpha/);
  });
});
