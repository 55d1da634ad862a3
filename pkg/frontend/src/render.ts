/**
 * DOM rendering: one screen per board, the card form, and the overview.
 * Everything rendered comes from fetched state; the only client-side
 * embellishment is the `pending` badge on optimistic cards.
 */

import { BoardStore } from "./store.js";
import {
  boxesOf,
  FIELD_OPTIONS,
  PAYLOAD_FIELDS,
  validateCardPayload,
  categoryOf,
  type BoardName,
} from "./taxonomy.js";
import type { CardView, CaseView, OverviewView } from "./types.js";

const MAX_COMPETITOR_COLUMNS = 3;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cardNode(card: CardView, pending: boolean): HTMLElement {
  const node = el("div", pending ? "card pending" : "card");
  node.dataset.cardId = card.card_id;
  node.appendChild(el("div", "card-title", card.title));
  if (card.description) node.appendChild(el("div", "card-desc", card.description));
  for (const [name, value] of Object.entries(card.payload)) {
    if (value === null || value === undefined || value === "") continue;
    node.appendChild(el("span", `badge badge-${name}`, `${name}: ${value}`));
  }
  if (pending) node.appendChild(el("span", "badge badge-pending", "saving..."));
  return node;
}

/**
 * The Gap board compares the own company against up to three competitors,
 * one column each; every other board gets one column per box.
 */
export function renderBoard(
  container: HTMLElement,
  store: BoardStore,
  caseView: CaseView,
): void {
  container.textContent = "";
  container.appendChild(el("h2", "board-title", store.board));
  if (store.error) container.appendChild(el("div", "error", store.error));

  if (store.board === "Gap") {
    renderGapColumns(container, store, caseView);
    return;
  }
  const columns = el("div", "columns");
  for (const box of boxesOf(store.board)) {
    const column = el("div", "box");
    column.dataset.box = box;
    column.appendChild(el("h3", "box-title", box));
    for (const card of store.cards) {
      if (card.box !== box) continue;
      column.appendChild(cardNode(card, store.isPending(card.card_id)));
    }
    columns.appendChild(column);
  }
  container.appendChild(columns);
}

function renderGapColumns(
  container: HTMLElement,
  store: BoardStore,
  caseView: CaseView,
): void {
  const ownNames = new Set([caseView.title]);
  if (caseView.company) ownNames.add(caseView.company.company_name);

  const bySubject = new Map<string, CardView[]>();
  for (const card of store.cards) {
    const subject = String(card.payload["subject_company"] ?? caseView.title);
    const bucket = bySubject.get(subject) ?? [];
    bucket.push(card);
    bySubject.set(subject, bucket);
  }

  const own = [...bySubject.keys()].filter((name) => ownNames.has(name));
  const competitors = [...bySubject.keys()]
    .filter((name) => !ownNames.has(name))
    .slice(0, MAX_COMPETITOR_COLUMNS);

  const columns = el("div", "columns");
  for (const subject of [...own, ...competitors]) {
    const column = el("div", ownNames.has(subject) ? "box own" : "box competitor");
    column.dataset.subject = subject;
    column.appendChild(el("h3", "box-title", subject));
    for (const card of bySubject.get(subject) ?? []) {
      column.appendChild(cardNode(card, store.isPending(card.card_id)));
    }
    columns.appendChild(column);
  }
  container.appendChild(columns);
}

export interface CardFormHandlers {
  onSubmit: (box: string, fields: Record<string, unknown>, title: string) => void;
}

/**
 * Build the create-card form for one box. Submission validates the payload
 * against the category schema first; invalid forms render inline errors and
 * never reach onSubmit (and therefore never reach the API).
 */
export function renderCardForm(
  container: HTMLElement,
  board: BoardName,
  box: string,
  handlers: CardFormHandlers,
): void {
  container.textContent = "";
  const category = categoryOf(board, box);
  const form = el("form", "card-form");
  form.dataset.box = box;

  const titleInput = el("input");
  titleInput.name = "title";
  titleInput.placeholder = "Title";
  form.appendChild(titleInput);

  for (const field of PAYLOAD_FIELDS[category] ?? []) {
    const options = FIELD_OPTIONS[field];
    if (options) {
      const select = el("select");
      select.name = field;
      const blank = el("option", undefined, `choose ${field}`);
      blank.value = "";
      select.appendChild(blank);
      for (const option of options) {
        const node = el("option", undefined, option);
        node.value = option;
        select.appendChild(node);
      }
      form.appendChild(select);
    } else {
      const input = el("input");
      input.name = field;
      input.placeholder = field;
      form.appendChild(input);
    }
  }

  const errorBox = el("div", "form-errors");
  form.appendChild(errorBox);
  const submit = el("button", undefined, "Add card");
  submit.type = "submit";
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const fields: Record<string, unknown> = {};
    for (const field of PAYLOAD_FIELDS[category] ?? []) {
      const input = form.elements.namedItem(field) as
        | HTMLInputElement
        | HTMLSelectElement
        | null;
      let value: unknown = input?.value ?? "";
      if (field === "value" && value !== "") value = Number(value);
      fields[field] = value;
    }
    const errors = validateCardPayload(category, fields);
    errorBox.textContent = "";
    if (errors.length > 0) {
      for (const error of errors) {
        errorBox.appendChild(el("div", "field-error", `${error.field}: ${error.message}`));
      }
      return;
    }
    handlers.onSubmit(box, fields, titleInput.value);
  });

  container.appendChild(form);
}

export function renderOverview(container: HTMLElement, overview: OverviewView): void {
  container.textContent = "";
  container.appendChild(el("h2", "board-title", "Overview"));

  const table = el("table", "pnl");
  const head = el("tr");
  for (const label of ["Month", "Revenue", "Cost", "Net"]) {
    head.appendChild(el("th", undefined, label));
  }
  table.appendChild(head);
  for (const [month, pnl] of Object.entries(overview.pnl_forecast)) {
    const row = el("tr");
    row.appendChild(el("td", undefined, month));
    row.appendChild(el("td", undefined, pnl.revenue.toFixed(2)));
    row.appendChild(el("td", undefined, pnl.cost.toFixed(2)));
    row.appendChild(el("td", undefined, pnl.net.toFixed(2)));
    table.appendChild(row);
  }
  container.appendChild(table);

  const tasks = el("div", "worklist");
  tasks.appendChild(el("h3", undefined, "Unfinished tasks"));
  for (const title of overview.unfinished_tasks) {
    tasks.appendChild(el("div", "worklist-item", title));
  }
  container.appendChild(tasks);

  const objectives = el("div", "worklist");
  objectives.appendChild(el("h3", undefined, "Objectives this period"));
  for (const title of overview.period_objectives) {
    objectives.appendChild(el("div", "worklist-item", title));
  }
  container.appendChild(objectives);
}
