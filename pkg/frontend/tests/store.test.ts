import { describe, expect, it } from "vitest";

import { ApiError, type ApiClient, type CardBody } from "../src/api.js";
import { BoardStore } from "../src/store.js";
import type { CardView } from "../src/types.js";

function card(overrides: Partial<CardView> = {}): CardView {
  return {
    card_id: "case-1-card-001",
    board: "BusinessIdea",
    box: "Key Contribution",
    category: 7,
    title: "Fast onboarding",
    description: "",
    payload: {},
    ...overrides,
  };
}

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (error: unknown) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (error: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

interface FakeApi {
  client: ApiClient;
  mutations: CardBody[];
  serverCards: CardView[];
  nextMutation: Deferred<{ card_id: string }> | null;
}

/** In-memory stand-in for ApiClient; mutateCard can be held open via nextMutation. */
function fakeApi(): FakeApi {
  const fake: FakeApi = {
    client: null as unknown as ApiClient,
    mutations: [],
    serverCards: [],
    nextMutation: null,
  };
  fake.client = {
    listCards: async () => fake.serverCards.map((c) => ({ ...c })),
    mutateCard: async (_caseId: string, body: CardBody) => {
      fake.mutations.push(body);
      if (fake.nextMutation) {
        const gate = fake.nextMutation;
        fake.nextMutation = null;
        return gate.promise;
      }
      return { card_id: "case-1-card-042", event: {} };
    },
    moveTask: async () => ({ event: {} }),
  } as unknown as ApiClient;
  return fake;
}

describe("BoardStore.createCard", () => {
  it("renders the card optimistically, then swaps in the journaled id", async () => {
    const fake = fakeApi();
    const store = new BoardStore(fake.client, "case-1", "BusinessIdea");
    const gate = deferred<{ card_id: string }>();
    fake.nextMutation = gate;

    const pending = store.createCard({
      participant_id: "p1",
      box: "Key Contribution",
      title: "Fast onboarding",
    });
    expect(store.cards).toHaveLength(1);
    const shown = store.cards[0]!;
    expect(store.isPending(shown.card_id)).toBe(true);
    expect(shown.category).toBe(7);

    gate.resolve({ card_id: "case-1-card-042" });
    const confirmed = await pending;
    expect(confirmed?.card_id).toBe("case-1-card-042");
    expect(store.cards.map((c) => c.card_id)).toEqual(["case-1-card-042"]);
    expect(store.isPending(store.cards[0]!.card_id)).toBe(false);
  });

  it("rolls the optimistic card back when the API rejects it", async () => {
    const fake = fakeApi();
    const store = new BoardStore(fake.client, "case-1", "BusinessIdea");
    const gate = deferred<{ card_id: string }>();
    fake.nextMutation = gate;

    const pending = store.createCard({
      participant_id: "p1",
      box: "Key Contribution",
      title: "Doomed",
    });
    expect(store.cards).toHaveLength(1);

    gate.reject(new ApiError(409, "lifecycle_violation", "card is deleted"));
    expect(await pending).toBeNull();
    expect(store.cards).toHaveLength(0);
    expect(store.error).toBe("changed elsewhere; refresh the board");
  });
});

describe("BoardStore.updateCard", () => {
  it("applies the edit optimistically and restores the snapshot on failure", async () => {
    const fake = fakeApi();
    fake.serverCards = [card()];
    const store = new BoardStore(fake.client, "case-1", "BusinessIdea");
    await store.refresh();

    const gate = deferred<{ card_id: string }>();
    fake.nextMutation = gate;
    const pending = store.updateCard("case-1-card-001", {
      participant_id: "p1",
      box: "Key Contribution",
      title: "Sharper title",
    });
    expect(store.cards[0]!.title).toBe("Sharper title");

    gate.reject(new ApiError(409, "illegal_transition", "deleted card"));
    expect(await pending).toBe(false);
    expect(store.cards[0]!.title).toBe("Fast onboarding");
    expect(store.error).toBe("changed elsewhere; refresh the board");
  });
});

describe("BoardStore.deleteCard", () => {
  it("keeps the card on the board until the API confirms the delete", async () => {
    const fake = fakeApi();
    fake.serverCards = [card()];
    const store = new BoardStore(fake.client, "case-1", "BusinessIdea");
    await store.refresh();

    const gate = deferred<{ card_id: string }>();
    fake.nextMutation = gate;
    const pending = store.deleteCard("case-1-card-001", "p1", "Key Contribution");
    expect(store.cards).toHaveLength(1);

    gate.resolve({ card_id: "case-1-card-001" });
    expect(await pending).toBe(true);
    expect(store.cards).toHaveLength(0);
    expect(fake.mutations[0]?.action).toBe("Delete");
  });

  it("leaves the board untouched when the delete fails", async () => {
    const fake = fakeApi();
    fake.serverCards = [card()];
    const store = new BoardStore(fake.client, "case-1", "BusinessIdea");
    await store.refresh();

    const gate = deferred<{ card_id: string }>();
    fake.nextMutation = gate;
    const pending = store.deleteCard("case-1-card-001", "p1", "Key Contribution");
    gate.reject(new ApiError(404, "unknown_card", "no such card"));
    expect(await pending).toBe(false);
    expect(store.cards).toHaveLength(1);
    expect(store.error).toBe("no such card");
  });
});

describe("BoardStore.refresh", () => {
  it("replaces the board with server truth, dropping client-only cards", async () => {
    const fake = fakeApi();
    fake.serverCards = [card()];
    const store = new BoardStore(fake.client, "case-1", "BusinessIdea");
    store.cards = [card({ card_id: "pending-99", title: "Ghost" }), card()];

    await store.refresh();
    expect(store.cards.map((c) => c.card_id)).toEqual(["case-1-card-001"]);
    expect(store.error).toBeNull();
  });
});

describe("BoardStore.moveTask", () => {
  it("patches box and status only after the journal confirms", async () => {
    const fake = fakeApi();
    fake.serverCards = [
      card({
        card_id: "case-1-card-007",
        board: "Task",
        box: "Queue",
        category: 19,
        payload: { status: "Queue" },
      }),
    ];
    const store = new BoardStore(fake.client, "case-1", "Task");
    await store.refresh();

    expect(await store.moveTask("case-1-card-007", "p1", "Active")).toBe(true);
    expect(store.cards[0]!.box).toBe("Active");
    expect(store.cards[0]!.payload["status"]).toBe("Active");
  });
});
