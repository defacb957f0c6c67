/** HTML renderers: UiSessionView in, markup out.  Pure string builders so
 * the view layer stays testable; main.ts owns injection and events. */

import { AWAITING_LABELS, Bar, FINISHED, UiSessionView } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderBars(bars: Bar[], title: string): string {
  const rows = bars
    .map(
      (bar) => `
      <div class="bar-row">
        <span class="bar-label">${escapeHtml(bar.name)}</span>
        <span class="bar-track">
          <span class="bar-fill" style="width:${(bar.share * 100).toFixed(1)}%;background:${bar.color}"></span>
        </span>
        <span class="bar-value">${bar.value}</span>
      </div>`,
    )
    .join("");
  return `<section class="bars"><h3>${escapeHtml(title)}</h3>${rows}</section>`;
}

function renderHeader(view: UiSessionView): string {
  const f1 =
    view.devMacroF1 === null ? "" : ` &middot; dev macro-F1 ${view.devMacroF1.toFixed(4)}`;
  return `
    <header>
      <h1>dcalm annotation</h1>
      <p class="meta">session ${escapeHtml(view.sessionId)} &middot;
        round ${view.round} &middot;
        ${view.progress.labeled}/${view.progress.budget} labeled${f1}</p>
    </header>`;
}

function renderError(view: UiSessionView): string {
  if (view.error === null) {
    return "";
  }
  return `<div class="banner error">${escapeHtml(view.error)}</div>`;
}

function renderItemRow(view: UiSessionView, rowIndex: number): string {
  const row = view.items[rowIndex];
  if (row === undefined) {
    return "";
  }
  const buttons = view.classes
    .map((option) => {
      const chosen = row.choice === option.index ? " chosen" : "";
      const hint = option.key === null ? "" : `<kbd>${option.key}</kbd>`;
      return `<button type="button" class="choice${chosen}"
        data-item="${row.id}" data-class="${option.index}"
        style="--class-color:${option.color}">${hint}${escapeHtml(option.name)}</button>`;
    })
    .join("");
  const active = view.activeItem === row.id ? " active" : "";
  return `
    <li class="item${active}" data-row="${row.id}">
      <p class="text">${escapeHtml(row.text)}</p>
      <div class="choices">${buttons}</div>
    </li>`;
}

function renderBatch(view: UiSessionView): string {
  const rows = view.items.map((_, i) => renderItemRow(view, i)).join("");
  const disabled = view.canSubmit ? "" : " disabled";
  const remaining = view.items.filter((row) => row.choice === null).length;
  const note =
    remaining === 0 ? "batch complete" : `${remaining} of ${view.items.length} unlabeled`;
  return `
    ${renderError(view)}
    <ol class="batch">${rows}</ol>
    <footer class="submit-row">
      <span class="note">${note}</span>
      <button type="button" id="submit"${disabled}>submit batch</button>
    </footer>`;
}

function renderSpinner(): string {
  return `<div class="spinner" role="status">training&hellip;</div>`;
}

function renderFinished(view: UiSessionView): string {
  return `
    ${renderError(view)}
    <div class="banner done">budget spent; session finished</div>
    ${renderBars(view.labelBars, "acquired label distribution")}
    ${renderBars(view.errorBars, "test error distribution")}`;
}

export function renderApp(view: UiSessionView): string {
  let body: string;
  if (view.state === FINISHED) {
    body = renderFinished(view);
  } else if (view.busy || view.state !== AWAITING_LABELS) {
    body = renderSpinner();
  } else {
    body = `${renderBatch(view)}${renderBars(view.labelBars, "acquired label distribution")}`;
  }
  return `${renderHeader(view)}<main>${body}</main>`;
}

/** Entry screen shown before a session exists. */
export function renderLobby(error: string | null, exampleConfig: string): string {
  const banner = error === null ? "" : `<div class="banner error">${escapeHtml(error)}</div>`;
  return `
    <header><h1>dcalm annotation</h1></header>
    <main>
      ${banner}
      <section class="lobby">
        <h3>join a session</h3>
        <form id="join"><input name="session" placeholder="session id" />
          <button type="submit">join</button></form>
        <h3>or create one</h3>
        <form id="create">
          <textarea name="config" rows="12" spellcheck="false">${escapeHtml(exampleConfig)}</textarea>
          <button type="submit">create session</button>
        </form>
      </section>
    </main>`;
}
