/**
 * Client-side mirror of the board/box classification and the per-category
 * payload schemas, used to build forms and validate them before any API
 * call. The backend re-validates everything; this copy only exists so bad
 * input is flagged inline instead of round-tripping.
 */

export type BoardName =
  | "Resource"
  | "BusinessIdea"
  | "BusinessModel"
  | "Gap"
  | "Objectives"
  | "Risk"
  | "Task";

export const PLANNING_BOARDS: readonly BoardName[] = [
  "Resource",
  "BusinessIdea",
  "BusinessModel",
  "Gap",
  "Objectives",
  "Risk",
  "Task",
];

export const BOARD_LABELS: Record<BoardName, string> = {
  Resource: "Resource",
  BusinessIdea: "Business Idea",
  BusinessModel: "Business Model",
  Gap: "Gap",
  Objectives: "Objectives",
  Risk: "Risk",
  Task: "Task",
};

/** Box -> event category, per board. Task's kanban columns share category 19. */
export const BOX_CATEGORY: Record<BoardName, Record<string, number>> = {
  Resource: {
    Values: 3,
    Vision: 4,
    "Owner's Objectives": 5,
  },
  BusinessIdea: {
    "Business Idea": 6,
    "Key Contribution": 7,
    "Key Market": 8,
    Distinction: 9,
  },
  BusinessModel: {
    "Early Market Customer": 10,
    "Unique Value Proposition": 11,
    "Product Feature": 12,
    Partner: 13,
    "How to Sell": 14,
    "How to Get Paid": 15,
  },
  Gap: {
    "Strength & Weaknesses": 16,
  },
  Objectives: {
    Objectives: 17,
  },
  Risk: {
    "Opportunities & Threats": 18,
  },
  Task: {
    Queue: 19,
    Active: 19,
    Done: 19,
  },
};

export function boxesOf(board: BoardName): string[] {
  return Object.keys(BOX_CATEGORY[board]);
}

export function categoryOf(board: BoardName, box: string): number {
  const category = BOX_CATEGORY[board]?.[box];
  if (category === undefined) {
    throw new Error(`board ${board} has no box ${JSON.stringify(box)}`);
  }
  return category;
}

/** Payload fields per category; categories 3-15 carry none beyond title/description. */
export const PAYLOAD_FIELDS: Record<number, readonly string[]> = {
  16: ["polarity", "subject_company"],
  17: ["objective_category", "objective_type", "actual_vs_forecast", "month", "value"],
  18: ["kind", "probability", "consequence"],
  19: ["cost_group", "month", "actual_vs_forecast", "value", "status"],
};

export const FIELD_OPTIONS: Record<string, readonly string[]> = {
  polarity: ["Strength", "Weakness"],
  objective_category: ["Skills", "ProductMarket", "Money"],
  objective_type: ["Milestone", "Numerical", "Revenue", "Loan", "Equity", "Grant"],
  actual_vs_forecast: ["Actual", "Forecast"],
  kind: ["Opportunity", "Threat"],
  probability: ["Low", "Medium", "High"],
  consequence: ["Low", "Medium", "High"],
  cost_group: ["Monthly", "One-off"],
  status: ["Queue", "Active", "Done"],
};

const MONEY_OBJECTIVE_TYPES = new Set(["Revenue", "Loan", "Equity", "Grant"]);
const MONTH_PATTERN = /^\d{4}-(0[1-9]|1[0-2])$/;

export interface FieldError {
  field: string;
  message: string;
}

/**
 * Validate a card form's payload fields against the category schema.
 * Returns one error per offending field; an empty list means submittable.
 */
export function validateCardPayload(
  category: number,
  fields: Record<string, unknown>,
): FieldError[] {
  const expected = PAYLOAD_FIELDS[category] ?? [];
  const errors: FieldError[] = [];

  for (const name of Object.keys(fields)) {
    if (!expected.includes(name)) {
      errors.push({ field: name, message: "not part of this card type" });
    }
  }
  for (const name of expected) {
    const value = fields[name];
    if (value === undefined || value === null || value === "") {
      errors.push({ field: name, message: "required" });
      continue;
    }
    const options = FIELD_OPTIONS[name];
    if (options && !options.includes(String(value))) {
      errors.push({ field: name, message: `must be one of ${options.join(", ")}` });
    }
    if (name === "month" && !MONTH_PATTERN.test(String(value))) {
      errors.push({ field: name, message: "must look like 2017-03" });
    }
    if (name === "value") {
      const numeric = Number(value);
      if (!Number.isFinite(numeric) || numeric < 0) {
        errors.push({ field: name, message: "must be a non-negative number" });
      }
    }
  }

  if (category === 17 && errors.length === 0) {
    const money = fields["objective_category"] === "Money";
    const typeIsMoney = MONEY_OBJECTIVE_TYPES.has(String(fields["objective_type"]));
    if (money !== typeIsMoney) {
      errors.push({
        field: "objective_type",
        message: money
          ? "Money objectives need a Revenue, Loan, Equity or Grant type"
          : "only Money objectives may use a financial type",
      });
    }
  }
  return errors;
}
