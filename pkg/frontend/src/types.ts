/**
 * Response shapes of the platform HTTP API, mirrored field for field.
 * Keys stay snake_case so objects pass through JSON without mapping.
 */

export interface CompanyView {
  company_name: string;
  organization_number: string;
  country: string;
  consent: boolean;
}

export interface CaseView {
  case_id: string;
  title: string;
  period_months: number;
  rolling: boolean;
  canvas_model: string;
  period_start: string;
  period_end: string;
  company: CompanyView | null;
  participants: string[];
  ideas: string[];
}

export interface CardView {
  card_id: string;
  board: string | null;
  box: string | null;
  category: number | null;
  title: string;
  description: string;
  payload: Record<string, unknown>;
}

export interface EventView {
  case_id: string;
  card_id: string;
  event_id: number;
  timestamp: string;
  category: number;
  action: string;
  participant_id: string;
  title: string;
  description: string;
  idea_ref: string | null;
  payload: Record<string, unknown>;
}

export interface MarketResultView {
  market_name: string;
  revenue_min: number;
  revenue_max: number;
  card_id: string;
}

export interface MonthlyPnlView {
  revenue: number;
  cost: number;
  net: number;
}

export interface OverviewView {
  pnl_forecast: Record<string, MonthlyPnlView>;
  unfinished_tasks: string[];
  period_objectives: string[];
}

export interface IdeaSaveView {
  idea_id: string;
  valid: boolean;
  missing_boxes: string[];
  event: EventView;
}

export interface IdeaView {
  idea_id: string;
  title: string;
  contribution_cards: string[];
  market_cards: string[];
  distinction_cards: string[];
}

export interface InterviewResultView {
  card_id: string;
  average_score: number;
  customer_added: boolean;
  event: EventView;
}

export interface CardMutationView {
  card_id: string;
  event: EventView;
}
