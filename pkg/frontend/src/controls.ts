/**
 * Parameter controls generated from the served schema: number inputs for
 * scalars, selects for enums, a text input for scale-index lists. Inputs
 * validate against the schema on every change; invalid values disable the
 * run button (they are never sent).
 */

import type { ParamSchemaEntry } from "./apiClient.js";
import { groupEntries, parseIntList, validateValue } from "./schema.js";
import type { SessionStore } from "./state.js";

const GROUP_TITLES: Record<string, string> = {
  system: "Shearlet system",
  detection: "Detection",
  postprocess: "Postprocessing",
};

export interface ControlsHandle {
  errors: Map<string, string>;
  refreshValidity: () => void;
}

export function renderControls(
  root: HTMLElement,
  entries: ParamSchemaEntry[],
  session: SessionStore,
  onValidity: (ok: boolean) => void,
): ControlsHandle {
  const errors = new Map<string, string>();
  root.textContent = "";

  const refreshValidity = () => onValidity(errors.size === 0);

  for (const [group, groupEntriesList] of groupEntries(entries)) {
    const fieldset = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = GROUP_TITLES[group] ?? group;
    fieldset.appendChild(legend);

    for (const entry of groupEntriesList) {
      fieldset.appendChild(buildControl(entry, session, errors, refreshValidity));
    }
    root.appendChild(fieldset);
  }
  refreshValidity();
  return { errors, refreshValidity };
}

function buildControl(
  entry: ParamSchemaEntry,
  session: SessionStore,
  errors: Map<string, string>,
  refresh: () => void,
): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "control";
  const title = document.createElement("span");
  title.textContent = entry.label ?? entry.name;
  wrap.appendChild(title);

  const note = document.createElement("small");
  note.className = "error";

  const current = session.values[entry.name] ?? entry.default;

  const commit = (value: unknown) => {
    const err = validateValue(entry, value);
    if (err) {
      errors.set(entry.name, err);
      note.textContent = err;
    } else {
      errors.delete(entry.name);
      note.textContent = "";
      session.setValue(entry.name, value);
    }
    refresh();
  };

  if (entry.type === "enum") {
    const select = document.createElement("select");
    for (const choice of entry.choices ?? []) {
      const opt = document.createElement("option");
      opt.value = choice;
      opt.textContent = choice;
      if (choice === current) opt.selected = true;
      select.appendChild(opt);
    }
    select.addEventListener("change", () => commit(select.value));
    wrap.appendChild(select);
  } else if (entry.type === "intlist") {
    const input = document.createElement("input");
    input.type = "text";
    input.value = Array.isArray(current) ? current.join(",") : String(current);
    input.addEventListener("change", () => {
      const parsed = parseIntList(input.value);
      commit(parsed ?? input.value);
    });
    wrap.appendChild(input);
  } else {
    const input = document.createElement("input");
    input.type = "number";
    input.min = String(entry.min);
    input.max = String(entry.max);
    input.step = entry.type === "int" ? "1" : "any";
    input.value = String(current);
    input.addEventListener("change", () => commit(Number(input.value)));
    wrap.appendChild(input);
  }
  wrap.appendChild(note);
  return wrap;
}
