/**
 * Application shell: case picker, board tabs, wizard launchers, and an
 * activity feed polled from the event endpoint. All state lives on the
 * server; this module only wires DOM events to the API client and stores.
 */

import { ApiClient } from "./api.js";
import { BoardStore } from "./store.js";
import { renderBoard, renderCardForm, renderOverview } from "./render.js";
import { MarketWizard, InterviewWizard } from "./wizards.js";
import { PLANNING_BOARDS, boxesOf, type BoardName } from "./taxonomy.js";
import type { CaseView, EventView } from "./types.js";

interface AppState {
  api: ApiClient;
  caseView: CaseView | null;
  participantId: string;
  board: BoardName;
  stores: Map<BoardName, BoardStore>;
  eventCursor: number;
}

function storeFor(state: AppState, board: BoardName): BoardStore {
  const caseView = state.caseView;
  if (!caseView) throw new Error("no case selected");
  let store = state.stores.get(board);
  if (!store) {
    store = new BoardStore(state.api, caseView.case_id, board);
    state.stores.set(board, store);
  }
  return store;
}

async function refreshFeed(state: AppState, feed: HTMLElement): Promise<void> {
  if (!state.caseView) return;
  const events = await state.api.caseEvents(state.caseView.case_id, state.eventCursor);
  for (const event of events) {
    state.eventCursor = Math.max(state.eventCursor, event.event_id);
    feed.prepend(feedLine(event));
  }
}

function feedLine(event: EventView): HTMLElement {
  const line = document.createElement("div");
  line.className = "feed-item";
  line.textContent = `#${event.event_id} ${event.action} [${event.category}] ${event.title}`;
  return line;
}

async function showBoard(state: AppState, main: HTMLElement): Promise<void> {
  const caseView = state.caseView;
  if (!caseView) return;
  const store = storeFor(state, state.board);
  await store.refresh();
  main.textContent = "";

  const boardRoot = document.createElement("div");
  renderBoard(boardRoot, store, caseView);
  main.appendChild(boardRoot);

  for (const box of boxesOf(state.board)) {
    const formRoot = document.createElement("div");
    renderCardForm(formRoot, state.board, box, {
      onSubmit: (targetBox, fields, title) => {
        void store
          .createCard({
            participant_id: state.participantId,
            box: targetBox,
            title,
            payload: fields,
          })
          .then(() => showBoard(state, main));
      },
    });
    main.appendChild(formRoot);
  }
}

async function showOverview(state: AppState, main: HTMLElement): Promise<void> {
  if (!state.caseView) return;
  const view = await state.api.getOverview(state.caseView.case_id);
  main.textContent = "";
  renderOverview(main, view);
}

export function mount(root: HTMLElement, baseUrl: string): AppState {
  const state: AppState = {
    api: new ApiClient(baseUrl),
    caseView: null,
    participantId: "",
    board: "Resource",
    stores: new Map(),
    eventCursor: 0,
  };

  const tabs = document.createElement("nav");
  tabs.className = "tabs";
  const main = document.createElement("main");
  main.className = "board";
  const feed = document.createElement("aside");
  feed.className = "feed";

  for (const board of PLANNING_BOARDS) {
    const tab = document.createElement("button");
    tab.textContent = board;
    tab.addEventListener("click", () => {
      state.board = board;
      void showBoard(state, main).then(() => refreshFeed(state, feed));
    });
    tabs.appendChild(tab);
  }
  const overviewTab = document.createElement("button");
  overviewTab.textContent = "Overview";
  overviewTab.addEventListener("click", () => {
    void showOverview(state, main);
  });
  tabs.appendChild(overviewTab);

  root.textContent = "";
  root.appendChild(tabs);
  root.appendChild(main);
  root.appendChild(feed);
  return state;
}

export { MarketWizard, InterviewWizard };
