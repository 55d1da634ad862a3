/**
 * The three customer-test wizards.
 *
 * Both wizards compute a client-side preview with the same arithmetic the
 * backend uses, then compare the backend's journaled values against the
 * preview on submit. A mismatch is surfaced as an error, never silently
 * reconciled.
 */

import type { ApiClient, EstimateBody, ResponseBody } from "./api.js";
import type { InterviewResultView, MarketResultView } from "./types.js";

export interface RevenueBounds {
  min: number;
  max: number;
}

/** Expected revenue interval: customers x share x value, per bound. */
export function previewRevenueBounds(estimate: EstimateBody): RevenueBounds {
  return {
    min: estimate.customers_low * estimate.share_low * estimate.value_low,
    max: estimate.customers_high * estimate.share_high * estimate.value_high,
  };
}

export function validateEstimate(estimate: EstimateBody): string[] {
  const errors: string[] = [];
  const pairs: Array<[string, number, number]> = [
    ["customers", estimate.customers_low, estimate.customers_high],
    ["share", estimate.share_low, estimate.share_high],
    ["value", estimate.value_low, estimate.value_high],
  ];
  for (const [name, low, high] of pairs) {
    if (!Number.isFinite(low) || !Number.isFinite(high)) {
      errors.push(`${name}: both bounds are required`);
      continue;
    }
    if (low < 0 || high < 0) errors.push(`${name}: estimates must be non-negative`);
    if (low > high) errors.push(`${name}: low exceeds high`);
  }
  if (estimate.share_high > 1.0) errors.push("share: must be a fraction in [0, 1]");
  if (!estimate.market_name.trim()) errors.push("market_name: required");
  return errors;
}

export type WizardStep = "collect" | "preview" | "done";

export class MarketWizard {
  step: WizardStep = "collect";
  estimates: EstimateBody[] = [];
  errors: string[] = [];
  results: MarketResultView[] = [];

  addEstimate(estimate: EstimateBody): boolean {
    const errors = validateEstimate(estimate);
    if (errors.length > 0) {
      this.errors = errors;
      return false;
    }
    this.errors = [];
    this.estimates.push(estimate);
    return true;
  }

  removeEstimate(index: number): void {
    this.estimates.splice(index, 1);
  }

  previews(): RevenueBounds[] {
    return this.estimates.map(previewRevenueBounds);
  }

  next(): boolean {
    if (this.step === "collect") {
      if (this.estimates.length === 0) {
        this.errors = ["add at least one market estimate"];
        return false;
      }
      this.errors = [];
      this.step = "preview";
      return true;
    }
    return false;
  }

  back(): void {
    if (this.step === "preview") this.step = "collect";
  }

  /**
   * Journal the estimates. The backend recomputes the bounds; if its values
   * differ from the preview the wizard stays on the preview step and reports
   * the mismatch.
   */
  async submit(api: ApiClient, caseId: string, participantId: string): Promise<boolean> {
    if (this.step !== "preview") return false;
    const previews = this.previews();
    const { markets } = await api.runMarketSize(caseId, participantId, this.estimates);
    const mismatches: string[] = [];
    markets.forEach((market, index) => {
      const preview = previews[index];
      if (
        preview === undefined ||
        market.revenue_min !== preview.min ||
        market.revenue_max !== preview.max
      ) {
        mismatches.push(
          `${market.market_name}: server computed ` +
            `(${market.revenue_min}, ${market.revenue_max}), ` +
            `preview was ${preview ? `(${preview.min}, ${preview.max})` : "missing"}`,
        );
      }
    });
    if (mismatches.length > 0) {
      this.errors = mismatches;
      return false;
    }
    this.results = markets;
    this.errors = [];
    this.step = "done";
    return true;
  }
}

export function isValidRating(value: unknown): boolean {
  const numeric = Number(value);
  return Number.isInteger(numeric) && numeric >= 1 && numeric <= 7;
}

export function averageRating(responses: ResponseBody[]): number | null {
  const ratings: number[] = [];
  for (const response of responses) {
    ratings.push(...Object.values(response.ratings));
  }
  if (ratings.length === 0) return null;
  return ratings.reduce((sum, rating) => sum + rating, 0) / ratings.length;
}

export class InterviewWizard {
  step: WizardStep = "collect";
  responses: ResponseBody[] = [];
  errors: string[] = [];
  result: InterviewResultView | null = null;

  constructor(readonly testType: 20 | 21) {}

  addResponse(response: ResponseBody): boolean {
    const bad = Object.entries(response.ratings).filter(
      ([, rating]) => !isValidRating(rating),
    );
    if (bad.length > 0) {
      this.errors = bad.map(
        ([item, rating]) => `${item}: rating ${rating} is outside the 7-point scale`,
      );
      return false;
    }
    if (Object.keys(response.ratings).length === 0) {
      this.errors = ["a response needs at least one rating"];
      return false;
    }
    this.errors = [];
    this.responses.push(response);
    return true;
  }

  preview(): number | null {
    return averageRating(this.responses);
  }

  next(): boolean {
    if (this.step === "collect") {
      if (this.preview() === null) {
        this.errors = ["collect at least one rated response first"];
        return false;
      }
      this.errors = [];
      this.step = "preview";
      return true;
    }
    return false;
  }

  back(): void {
    if (this.step === "preview") this.step = "collect";
  }

  async submit(api: ApiClient, caseId: string, participantId: string): Promise<boolean> {
    if (this.step !== "preview") return false;
    const preview = this.preview();
    const result = await api.runInterview(caseId, participantId, this.testType, this.responses);
    if (preview === null || Math.abs(result.average_score - preview) > 1e-9) {
      this.errors = [
        `server averaged ${result.average_score}, preview was ${preview}`,
      ];
      return false;
    }
    this.result = result;
    this.errors = [];
    this.step = "done";
    return true;
  }
}
