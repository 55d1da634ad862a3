/**
 * Per-board card state.
 *
 * Create and Update render optimistically and roll back if the API rejects
 * them. Delete is destructive, so it waits for the API before touching the
 * board. refresh() replaces the whole view with server truth, which is what
 * guarantees that no client-only card survives a refresh.
 */

import { ApiClient } from "./api.js";
import { categoryOf, type BoardName } from "./taxonomy.js";
import type { CardView } from "./types.js";

export interface CardForm {
  participant_id: string;
  box: string;
  title: string;
  description?: string;
  payload?: Record<string, unknown>;
}

let pendingSequence = 0;

function pendingId(): string {
  pendingSequence += 1;
  return `pending-${pendingSequence}`;
}

export class BoardStore {
  cards: CardView[] = [];
  error: string | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly caseId: string,
    readonly board: BoardName,
  ) {}

  /** Pull the board's live cards; deleted and client-only cards drop out. */
  async refresh(): Promise<void> {
    this.cards = await this.api.listCards(this.caseId, this.board);
    this.error = null;
  }

  isPending(cardId: string): boolean {
    return cardId.startsWith("pending-");
  }

  async createCard(form: CardForm): Promise<CardView | null> {
    const temp: CardView = {
      card_id: pendingId(),
      board: this.board,
      box: form.box,
      category: categoryOf(this.board, form.box),
      title: form.title,
      description: form.description ?? "",
      payload: form.payload ?? {},
    };
    this.cards = [...this.cards, temp];
    try {
      const confirmed = await this.api.mutateCard(this.caseId, {
        participant_id: form.participant_id,
        board: this.board,
        box: form.box,
        action: "Create",
        title: form.title,
        description: form.description ?? "",
        payload: form.payload ?? {},
      });
      const journaled: CardView = { ...temp, card_id: confirmed.card_id };
      this.cards = this.cards.map((card) => (card === temp ? journaled : card));
      this.error = null;
      return journaled;
    } catch (err) {
      this.cards = this.cards.filter((card) => card !== temp);
      this.error = describe(err);
      return null;
    }
  }

  async updateCard(cardId: string, form: CardForm): Promise<boolean> {
    const snapshot = this.cards;
    this.cards = this.cards.map((card) =>
      card.card_id === cardId
        ? {
            ...card,
            title: form.title,
            description: form.description ?? card.description,
            payload: form.payload ?? card.payload,
          }
        : card,
    );
    try {
      await this.api.mutateCard(this.caseId, {
        participant_id: form.participant_id,
        board: this.board,
        box: form.box,
        action: "Update",
        card_id: cardId,
        title: form.title,
        description: form.description ?? "",
        payload: form.payload ?? {},
      });
      this.error = null;
      return true;
    } catch (err) {
      this.cards = snapshot;
      this.error = describe(err);
      return false;
    }
  }

  /** No optimistic rendering here: the card leaves the board only after the API says so. */
  async deleteCard(cardId: string, participantId: string, box: string): Promise<boolean> {
    try {
      await this.api.mutateCard(this.caseId, {
        participant_id: participantId,
        board: this.board,
        box,
        action: "Delete",
        card_id: cardId,
      });
    } catch (err) {
      this.error = describe(err);
      return false;
    }
    this.cards = this.cards.filter((card) => card.card_id !== cardId);
    this.error = null;
    return true;
  }

  /** Task drag between Queue/Active/Done; applied once the journal confirms. */
  async moveTask(
    cardId: string,
    participantId: string,
    toStatus: string,
    actualCost?: number,
  ): Promise<boolean> {
    try {
      await this.api.moveTask(this.caseId, cardId, {
        participant_id: participantId,
        to_status: toStatus,
        actual_cost: actualCost,
      });
    } catch (err) {
      this.error = describe(err);
      return false;
    }
    this.cards = this.cards.map((card) =>
      card.card_id === cardId
        ? { ...card, box: toStatus, payload: { ...card.payload, status: toStatus } }
        : card,
    );
    this.error = null;
    return true;
  }
}

function describe(err: unknown): string {
  if (err instanceof Error) {
    const code = (err as { code?: string }).code;
    if (code === "lifecycle_violation" || code === "illegal_transition") {
      return "changed elsewhere; refresh the board";
    }
    return err.message;
  }
  return String(err);
}
