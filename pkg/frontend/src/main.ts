/** Wiring: one session per tab, server as the only authority.  Every
 * render is recomputed from the latest snapshot plus local choices. */

import { createSession, getSnapshot, ServiceError, submitLabels } from "./api.js";
import { applyChoice, buildView, nextUnlabeled, toSubmission } from "./state.js";
import { renderApp, renderLobby } from "./render.js";
import { Choices, SessionSnapshot, UiSessionView } from "./types.js";

const EXAMPLE_CONFIG = JSON.stringify(
  {
    corpus: {
      synthetic: {
        class_counts: [90, 90, 60],
        dim: 8,
        separation: 2.5,
        with_text: true,
        seed: 3,
      },
    },
    strategy: {
      kind: "dcalm",
      num_clusters: 5,
      bootstrap_size: 25,
      batch_size: 25,
      budget: 100,
      seed: 1,
    },
    learner: { epochs: 25 },
  },
  null,
  2,
);

const app = document.getElementById("app") as HTMLElement;

let snapshot: SessionSnapshot | null = null;
let choices: Choices = {};
let busy = false;
let error: string | null = null;
let activeItem: number | null = null;
let view: UiSessionView | null = null;

function sessionIdFromHash(): string | null {
  const id = window.location.hash.replace(/^#/, "");
  return id === "" ? null : id;
}

function draw(): void {
  if (snapshot === null) {
    view = null;
    app.innerHTML = renderLobby(error, EXAMPLE_CONFIG);
    return;
  }
  view = buildView(snapshot, choices, { busy, error, activeItem });
  activeItem = view.activeItem;
  app.innerHTML = renderApp(view);
  const row = app.querySelector(".item.active");
  if (row !== null) {
    row.scrollIntoView({ block: "nearest" });
  }
}

async function refresh(sessionId: string): Promise<void> {
  try {
    snapshot = await getSnapshot(sessionId);
    window.location.hash = sessionId;
  } catch (err) {
    snapshot = null;
    error = err instanceof Error ? err.message : String(err);
  }
  draw();
}

function choose(itemId: number, classIndex: number): void {
  if (snapshot === null || busy) {
    return;
  }
  const before = choices;
  choices = applyChoice(choices, itemId, classIndex, snapshot.class_names.length);
  if (choices !== before && view !== null) {
    // advance the keyboard cursor to the next open row
    const items = view.items.map((r) =>
      r.id === itemId ? { ...r, choice: classIndex } : r,
    );
    activeItem = nextUnlabeled(items, itemId);
  }
  error = null;
  draw();
}

async function submit(): Promise<void> {
  if (snapshot === null || view === null || !view.canSubmit) {
    return;
  }
  const body = toSubmission(view);
  busy = true;
  error = null;
  draw();
  try {
    await submitLabels(snapshot.session_id, body);
    choices = {};
    activeItem = null;
  } catch (err) {
    // rejected batches cost nothing server-side; keep the inputs intact
    error = err instanceof ServiceError ? err.message : "submission failed";
  }
  busy = false;
  await refresh(snapshot.session_id);
}

async function create(configText: string): Promise<void> {
  let config: unknown;
  try {
    config = JSON.parse(configText);
  } catch {
    error = "config is not valid JSON";
    draw();
    return;
  }
  try {
    const created = await createSession(config);
    choices = {};
    error = null;
    await refresh(created.session_id);
  } catch (err) {
    error = err instanceof ServiceError ? err.message : "could not create session";
    draw();
  }
}

app.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const choice = target.closest<HTMLElement>("button[data-item][data-class]");
  if (choice !== null) {
    choose(Number(choice.dataset.item), Number(choice.dataset.class));
    return;
  }
  if (target.closest("#submit") !== null) {
    void submit();
  }
});

app.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  event.preventDefault();
  if (form.id === "join") {
    const id = new FormData(form).get("session");
    if (typeof id === "string" && id.trim() !== "") {
      void refresh(id.trim());
    }
  } else if (form.id === "create") {
    const config = new FormData(form).get("config");
    if (typeof config === "string") {
      void create(config);
    }
  }
});

document.addEventListener("keydown", (event) => {
  if (
    snapshot === null ||
    busy ||
    event.target instanceof HTMLInputElement ||
    event.target instanceof HTMLTextAreaElement
  ) {
    return;
  }
  if (event.key >= "1" && event.key <= "9" && activeItem !== null) {
    choose(activeItem, Number(event.key) - 1);
  } else if (event.key === "Enter") {
    void submit();
  }
});

const initial = sessionIdFromHash();
if (initial === null) {
  draw();
} else {
  void refresh(initial);
}
