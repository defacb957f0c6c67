/** Pure view-model functions: server snapshot + unsubmitted choices in,
 * render-ready view out.  Nothing here touches the DOM or the network. */

import {
  AWAITING_LABELS,
  Bar,
  Choices,
  ClassOption,
  ItemRow,
  SessionSnapshot,
  UiSessionView,
} from "./types.js";

/** Tableau-10; cycles when a corpus has more classes than colors. */
export const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc949", "#af7aa1", "#ff9da7", "#9c755f", "#bab0ab",
];

export function classOptions(classNames: string[]): ClassOption[] {
  return classNames.map((name, index) => ({
    index,
    name,
    color: PALETTE[index % PALETTE.length] as string,
    key: index < 9 ? String(index + 1) : null,
  }));
}

/** Bars mirror the counts exactly: one bar per class, in class order. */
export function distributionBars(
  counts: Record<string, number>,
  classNames: string[],
): Bar[] {
  const total = classNames.reduce((sum, name) => sum + (counts[name] ?? 0), 0);
  return classNames.map((name, index) => ({
    name,
    value: counts[name] ?? 0,
    share: total > 0 ? (counts[name] ?? 0) / total : 0,
    color: PALETTE[index % PALETTE.length] as string,
  }));
}

/** New choice map with one selection changed; out-of-range indexes are
 * ignored so stray keystrokes cannot invent labels. */
export function applyChoice(
  choices: Choices,
  itemId: number,
  classIndex: number,
  numClasses: number,
): Choices {
  if (classIndex < 0 || classIndex >= numClasses) {
    return choices;
  }
  return { ...choices, [itemId]: classIndex };
}

/** The item keyboard input should target next: the first unlabeled row at
 * or after `fromId`, wrapping around; null once everything is labeled. */
export function nextUnlabeled(items: ItemRow[], fromId: number | null): number | null {
  if (items.length === 0) {
    return null;
  }
  const start = fromId === null ? 0 : items.findIndex((row) => row.id === fromId);
  const origin = start < 0 ? 0 : start;
  for (let step = 0; step < items.length; step += 1) {
    const row = items[(origin + step) % items.length] as ItemRow;
    if (row.choice === null) {
      return row.id;
    }
  }
  return null;
}

export interface ViewOptions {
  busy?: boolean;
  error?: string | null;
  activeItem?: number | null;
}

/** Assemble the whole view.  Choices for ids no longer pending are
 * dropped; the server snapshot is the only authority on what is open. */
export function buildView(
  snapshot: SessionSnapshot,
  choices: Choices,
  options: ViewOptions = {},
): UiSessionView {
  const busy = options.busy ?? false;
  const classes = classOptions(snapshot.class_names);
  const items: ItemRow[] = snapshot.pending.map((item) => ({
    id: item.id,
    text: item.text,
    choice: choices[item.id] ?? null,
  }));
  const allLabeled = items.length > 0 && items.every((row) => row.choice !== null);
  const active =
    options.activeItem !== undefined && items.some((r) => r.id === options.activeItem)
      ? options.activeItem
      : nextUnlabeled(items, null);
  return {
    sessionId: snapshot.session_id,
    state: snapshot.state,
    busy,
    error: options.error ?? null,
    classes,
    items,
    activeItem: active,
    progress: snapshot.progress,
    round: snapshot.round,
    devMacroF1: snapshot.dev_macro_f1,
    labelBars: distributionBars(snapshot.report.label_counts, snapshot.class_names),
    errorBars: distributionBars(snapshot.report.test_error_counts, snapshot.class_names),
    canSubmit: snapshot.state === AWAITING_LABELS && !busy && allLabeled,
  };
}

/** The POST body for the labels endpoint: item id -> chosen class name. */
export function toSubmission(view: UiSessionView): Record<string, string> {
  const body: Record<string, string> = {};
  for (const row of view.items) {
    if (row.choice === null) {
      throw new Error(`item ${row.id} has no label`);
    }
    const option = view.classes[row.choice];
    if (option === undefined) {
      throw new Error(`item ${row.id} has an invalid class index ${row.choice}`);
    }
    body[String(row.id)] = option.name;
  }
  return body;
}
