/**
 * Typed client for the platform HTTP API.
 *
 * Domain failures arrive as {code, message} JSON with a 4xx status; they are
 * rethrown as ApiError so callers can branch on `code` (for example
 * `lifecycle_violation` is rendered as "changed elsewhere").
 */

import type {
  CardMutationView,
  CardView,
  CaseView,
  EventView,
  IdeaSaveView,
  IdeaView,
  InterviewResultView,
  MarketResultView,
  OverviewView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface CreateCaseBody {
  title: string;
  period_months?: number;
  rolling?: boolean;
  canvas_model?: string;
  period_start?: string;
  company?: {
    company_name: string;
    organization_number: string;
    country?: string;
    consent?: boolean;
  };
}

export interface ParticipantBody {
  participant_id: string;
  name: string;
  case_role?: string;
  participant_type?: string;
  internal?: boolean;
}

export interface CardBody {
  participant_id: string;
  board: string;
  box: string;
  action?: string;
  card_id?: string;
  title?: string;
  description?: string;
  payload?: Record<string, unknown>;
  idea_ref?: string;
}

export interface MoveTaskBody {
  participant_id: string;
  to_status: string;
  actual_cost?: number;
}

export interface EstimateBody {
  market_name: string;
  customers_low: number;
  customers_high: number;
  share_low: number;
  share_high: number;
  value_low: number;
  value_high: number;
}

export interface ResponseBody {
  interviewee_id: string;
  ratings: Record<string, number>;
  added_items?: string[];
  comments?: Record<string, string>;
}

export interface IdeaBody {
  participant_id: string;
  title: string;
  idea_id?: string;
  contribution_cards?: string[];
  market_cards?: string[];
  distinction_cards?: string[];
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "http_error";
      let message = `${method} ${path} failed with ${response.status}`;
      try {
        const parsed = (await response.json()) as Record<string, unknown>;
        if (typeof parsed.code === "string") code = parsed.code;
        if (typeof parsed.message === "string") message = parsed.message;
        else if (parsed.detail !== undefined) message = JSON.stringify(parsed.detail);
      } catch {
        // Non-JSON error body; keep the generic message.
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  createCase(body: CreateCaseBody): Promise<CaseView> {
    return this.request("POST", "/cases", body);
  }

  listCases(): Promise<CaseView[]> {
    return this.request("GET", "/cases");
  }

  getCase(caseId: string): Promise<CaseView> {
    return this.request("GET", `/cases/${caseId}`);
  }

  addParticipant(caseId: string, body: ParticipantBody): Promise<{ event: EventView }> {
    return this.request("POST", `/cases/${caseId}/participants`, body);
  }

  listCards(caseId: string, board?: string): Promise<CardView[]> {
    const query = board === undefined ? "" : `?board=${encodeURIComponent(board)}`;
    return this.request("GET", `/cases/${caseId}/cards${query}`);
  }

  mutateCard(caseId: string, body: CardBody): Promise<CardMutationView> {
    return this.request("POST", `/cases/${caseId}/cards`, body);
  }

  moveTask(caseId: string, cardId: string, body: MoveTaskBody): Promise<{ event: EventView }> {
    return this.request("POST", `/cases/${caseId}/tasks/${cardId}/move`, body);
  }

  runInterview(
    caseId: string,
    participantId: string,
    testType: number,
    responses: ResponseBody[],
  ): Promise<InterviewResultView> {
    return this.request("POST", `/cases/${caseId}/tests/interview`, {
      participant_id: participantId,
      test_type: testType,
      responses,
    });
  }

  runMarketSize(
    caseId: string,
    participantId: string,
    estimates: EstimateBody[],
  ): Promise<{ markets: MarketResultView[] }> {
    return this.request("POST", `/cases/${caseId}/tests/market-size`, {
      participant_id: participantId,
      estimates,
    });
  }

  getOverview(caseId: string, clockMonth?: string): Promise<OverviewView> {
    const query = clockMonth === undefined ? "" : `?clock_month=${encodeURIComponent(clockMonth)}`;
    return this.request("GET", `/cases/${caseId}/overview${query}`);
  }

  setConsent(caseId: string, consent: boolean): Promise<CaseView> {
    return this.request("PUT", `/cases/${caseId}/consent`, { consent });
  }

  saveIdea(caseId: string, body: IdeaBody): Promise<IdeaSaveView> {
    return this.request("POST", `/cases/${caseId}/ideas`, body);
  }

  ideasOfCard(caseId: string, cardId: string): Promise<IdeaView[]> {
    return this.request("GET", `/cases/${caseId}/ideas/of-card/${cardId}`);
  }

  caseEvents(caseId: string, since = 0, limit?: number): Promise<EventView[]> {
    const params = new URLSearchParams({ since: String(since) });
    if (limit !== undefined) params.set("limit", String(limit));
    return this.request("GET", `/cases/${caseId}/events?${params}`);
  }
}
