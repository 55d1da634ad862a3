import { describe, expect, it } from "vitest";

import type { ApiClient, EstimateBody, ResponseBody } from "../src/api.js";
import type { InterviewResultView, MarketResultView } from "../src/types.js";
import {
  averageRating,
  InterviewWizard,
  isValidRating,
  MarketWizard,
  previewRevenueBounds,
  validateEstimate,
} from "../src/wizards.js";

function estimate(overrides: Partial<EstimateBody> = {}): EstimateBody {
  return {
    market_name: "Nordics",
    customers_low: 1000,
    customers_high: 2000,
    share_low: 0.1,
    share_high: 0.2,
    value_low: 100,
    value_high: 200,
    ...overrides,
  };
}

describe("previewRevenueBounds", () => {
  it("multiplies customers, share and value per bound", () => {
    expect(previewRevenueBounds(estimate())).toEqual({
      min: 1000 * 0.1 * 100,
      max: 2000 * 0.2 * 200,
    });
  });

  it("is zero when any factor is zero", () => {
    const zeroed = estimate({ customers_low: 0, customers_high: 0 });
    expect(previewRevenueBounds(zeroed)).toEqual({ min: 0, max: 0 });
  });
});

describe("validateEstimate", () => {
  it("accepts a well-formed estimate", () => {
    expect(validateEstimate(estimate())).toEqual([]);
  });

  it("flags low bounds that exceed their high bound", () => {
    const errors = validateEstimate(estimate({ customers_low: 5000 }));
    expect(errors.some((e) => e.startsWith("customers:"))).toBe(true);
  });

  it("flags shares above one and negative values", () => {
    const errors = validateEstimate(estimate({ share_high: 1.5, value_low: -3 }));
    expect(errors.some((e) => e.includes("fraction"))).toBe(true);
    expect(errors.some((e) => e.startsWith("value:"))).toBe(true);
  });

  it("requires a market name and finite numbers", () => {
    const errors = validateEstimate(estimate({ market_name: "  ", customers_low: NaN }));
    expect(errors.some((e) => e.startsWith("market_name"))).toBe(true);
    expect(errors.some((e) => e.startsWith("customers"))).toBe(true);
  });
});

function marketApi(
  compute: (estimates: EstimateBody[]) => MarketResultView[],
): { client: ApiClient; calls: EstimateBody[][] } {
  const calls: EstimateBody[][] = [];
  const client = {
    runMarketSize: async (_caseId: string, _pid: string, estimates: EstimateBody[]) => {
      calls.push(estimates);
      return { markets: compute(estimates) };
    },
  } as unknown as ApiClient;
  return { client, calls };
}

function serverBounds(estimates: EstimateBody[]): MarketResultView[] {
  return estimates.map((e, index) => ({
    market_name: e.market_name,
    revenue_min: e.customers_low * e.share_low * e.value_low,
    revenue_max: e.customers_high * e.share_high * e.value_high,
    card_id: `card-${index}`,
  }));
}

describe("MarketWizard", () => {
  it("refuses to add an invalid estimate and keeps the list unchanged", () => {
    const wizard = new MarketWizard();
    expect(wizard.addEstimate(estimate({ share_high: 2 }))).toBe(false);
    expect(wizard.estimates).toHaveLength(0);
    expect(wizard.errors.length).toBeGreaterThan(0);
  });

  it("will not advance to preview without at least one estimate", () => {
    const wizard = new MarketWizard();
    expect(wizard.next()).toBe(false);
    expect(wizard.step).toBe("collect");
  });

  it("walks collect -> preview -> done when the server agrees", async () => {
    const wizard = new MarketWizard();
    expect(wizard.addEstimate(estimate())).toBe(true);
    expect(wizard.addEstimate(estimate({ market_name: "Baltics", customers_high: 3000 }))).toBe(
      true,
    );
    expect(wizard.next()).toBe(true);
    expect(wizard.step).toBe("preview");
    expect(wizard.previews()).toHaveLength(2);

    const { client, calls } = marketApi(serverBounds);
    expect(await wizard.submit(client, "case-1", "p1")).toBe(true);
    expect(wizard.step).toBe("done");
    expect(wizard.results.map((r) => r.market_name)).toEqual(["Nordics", "Baltics"]);
    expect(calls).toHaveLength(1);
  });

  it("reports a server mismatch instead of reconciling it", async () => {
    const wizard = new MarketWizard();
    wizard.addEstimate(estimate());
    wizard.next();

    const { client } = marketApi((estimates) =>
      serverBounds(estimates).map((m) => ({ ...m, revenue_max: m.revenue_max + 1 })),
    );
    expect(await wizard.submit(client, "case-1", "p1")).toBe(false);
    expect(wizard.step).toBe("preview");
    expect(wizard.results).toHaveLength(0);
    expect(wizard.errors[0]).toContain("server computed");
  });

  it("back() returns to collecting without losing estimates", () => {
    const wizard = new MarketWizard();
    wizard.addEstimate(estimate());
    wizard.next();
    wizard.back();
    expect(wizard.step).toBe("collect");
    expect(wizard.estimates).toHaveLength(1);
  });
});

describe("ratings", () => {
  it("accepts only whole numbers on the 7-point scale", () => {
    for (const good of [1, 2, 3, 4, 5, 6, 7]) expect(isValidRating(good)).toBe(true);
    for (const bad of [0, 8, 9, 2.5, -1, "x", null]) expect(isValidRating(bad)).toBe(false);
  });

  it("averages ratings across all responses", () => {
    const responses: ResponseBody[] = [
      { interviewee_id: "a", ratings: { pain: 7, urgency: 5 } },
      { interviewee_id: "b", ratings: { pain: 2 } },
    ];
    expect(averageRating(responses)).toBeCloseTo((7 + 5 + 2) / 3, 12);
    expect(averageRating([])).toBeNull();
  });
});

function interviewApi(average: (responses: ResponseBody[]) => number): ApiClient {
  return {
    runInterview: async (
      _caseId: string,
      _pid: string,
      _testType: number,
      responses: ResponseBody[],
    ): Promise<InterviewResultView> => ({
      card_id: "card-77",
      average_score: average(responses),
      customer_added: false,
      event: {} as InterviewResultView["event"],
    }),
  } as unknown as ApiClient;
}

describe("InterviewWizard", () => {
  it("rejects a response whose rating leaves the scale, without storing it", () => {
    const wizard = new InterviewWizard(20);
    const added = wizard.addResponse({ interviewee_id: "x", ratings: { pain: 9 } });
    expect(added).toBe(false);
    expect(wizard.responses).toHaveLength(0);
    expect(wizard.errors[0]).toContain("7-point scale");
  });

  it("rejects an empty response", () => {
    const wizard = new InterviewWizard(20);
    expect(wizard.addResponse({ interviewee_id: "x", ratings: {} })).toBe(false);
  });

  it("previews the running average and completes when the server agrees", async () => {
    const wizard = new InterviewWizard(21);
    wizard.addResponse({ interviewee_id: "a", ratings: { pain: 6, fit: 4 } });
    wizard.addResponse({ interviewee_id: "b", ratings: { pain: 5 } });
    expect(wizard.preview()).toBeCloseTo(5, 12);
    expect(wizard.next()).toBe(true);

    const ok = await wizard.submit(
      interviewApi((responses) => {
        const ratings = responses.flatMap((r) => Object.values(r.ratings));
        return ratings.reduce((s, r) => s + r, 0) / ratings.length;
      }),
      "case-1",
      "p1",
    );
    expect(ok).toBe(true);
    expect(wizard.step).toBe("done");
    expect(wizard.result?.card_id).toBe("card-77");
  });

  it("keeps a disagreeing server response as an error", async () => {
    const wizard = new InterviewWizard(20);
    wizard.addResponse({ interviewee_id: "a", ratings: { pain: 4 } });
    wizard.next();
    const ok = await wizard.submit(
      interviewApi(() => 4.5),
      "case-1",
      "p1",
    );
    expect(ok).toBe(false);
    expect(wizard.step).toBe("preview");
    expect(wizard.result).toBeNull();
  });
});
