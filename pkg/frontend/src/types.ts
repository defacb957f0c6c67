/** Wire types mirroring the annotation service JSON, plus the view model. */

export interface PendingItem {
  id: number;
  text: string;
}

export interface Progress {
  labeled: number;
  budget: number;
}

/** Label-distribution report as served by GET /sessions/{id}/report. */
export interface Report {
  strategy: string;
  round: number;
  label_counts: Record<string, number>;
  test_error_counts: Record<string, number>;
  allocations: number[] | null;
  cluster_accuracies: (number | null)[] | null;
}

/** Full session snapshot as served by GET /sessions/{id}. */
export interface SessionSnapshot {
  session_id: string;
  state: string;
  class_names: string[];
  progress: Progress;
  round: number;
  pending: PendingItem[];
  dev_macro_f1: number | null;
  report: Report;
}

export const AWAITING_LABELS = "awaiting_labels";
export const FINISHED = "finished";

/** In-progress, unsubmitted choices: pending item id -> class index. */
export type Choices = Record<number, number>;

export interface ClassOption {
  index: number;
  name: string;
  color: string;
  /** keyboard shortcut, "1".."9" for the first nine classes */
  key: string | null;
}

export interface ItemRow {
  id: number;
  text: string;
  choice: number | null;
}

export interface Bar {
  name: string;
  value: number;
  /** fraction of the total, 0 when the distribution is empty */
  share: number;
  color: string;
}

/**
 * Everything the renderer needs.  Derived purely from the latest server
 * snapshot plus unsubmitted choices; the client never infers labels.
 */
export interface UiSessionView {
  sessionId: string;
  state: string;
  busy: boolean;
  error: string | null;
  classes: ClassOption[];
  items: ItemRow[];
  activeItem: number | null;
  progress: Progress;
  round: number;
  devMacroF1: number | null;
  labelBars: Bar[];
  errorBars: Bar[];
  canSubmit: boolean;
}
