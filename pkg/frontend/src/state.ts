/**
 * Console state and its pure transitions. The alpha/beta pair is exposed as
 * one normalized slider (alpha + beta = 1) since only the ratio affects the
 * ranking; an advanced panel can override the raw values.
 */

import type { EvaluateData, SelectData, SweepData } from "./types.js";

export interface ConsoleState {
  context: Record<string, unknown>;
  requirements: Set<string>;
  sliderAlpha: number;            // normalized: beta = 1 - alpha
  rawWeights: { alpha: number; beta: number } | null; // advanced override
  evaluation: EvaluateData | null;
  selection: SelectData | null;
  sweepData: SweepData | null;
  fieldErrors: Map<string, string>;
  stale: boolean;                 // network failure banner
  lastError: string | null;
}

export function initialState(): ConsoleState {
  return {
    context: {},
    requirements: new Set(),
    sliderAlpha: 10 / 11,
    rawWeights: null,
    evaluation: null,
    selection: null,
    sweepData: null,
    fieldErrors: new Map(),
    stale: false,
    lastError: null,
  };
}

export function weightsOf(state: ConsoleState): { alpha: number; beta: number } {
  if (state.rawWeights) return state.rawWeights;
  return { alpha: state.sliderAlpha, beta: 1 - state.sliderAlpha };
}

/** A slider resting at its current value must not trigger a request. */
export function sliderChanged(state: ConsoleState, alpha: number): boolean {
  return !state.rawWeights && alpha !== state.sliderAlpha;
}

export function setSlider(state: ConsoleState, alpha: number): ConsoleState {
  return { ...state, sliderAlpha: Math.min(1, Math.max(0, alpha)), rawWeights: null };
}

export function applyEvaluation(state: ConsoleState, data: EvaluateData): ConsoleState {
  return { ...state, evaluation: data, stale: false, lastError: null,
           fieldErrors: new Map() };
}

export function applySelection(state: ConsoleState, data: SelectData): ConsoleState {
  return { ...state, selection: data, stale: false, lastError: null,
           fieldErrors: new Map() };
}

export function applySweep(state: ConsoleState, data: SweepData): ConsoleState {
  return { ...state, sweepData: data, stale: false, lastError: null };
}

/** 422 with field-naming violations: highlight the offending inputs. */
export function applyApiError(
  state: ConsoleState, message: string, violations: string[],
): ConsoleState {
  const fieldErrors = new Map<string, string>();
  for (const v of violations) {
    const idx = v.indexOf(":");
    if (idx > 0) fieldErrors.set(v.slice(0, idx).trim(), v.slice(idx + 1).trim());
  }
  return { ...state, lastError: message, fieldErrors, stale: false };
}

/** Network failure: keep showing the last data under a stale banner. */
export function markStale(state: ConsoleState): ConsoleState {
  return { ...state, stale: true };
}
