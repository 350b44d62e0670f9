/**
 * DOM wiring for the what-if console. All logic lives in the imported
 * modules; this file only moves values between inputs and renderers.
 */

import { ApiError, evaluate, registry, select, sweep } from "./api.js";
import { chartSvg } from "./chart.js";
import { DEBOUNCE_MS, debounce, latestWins } from "./debounce.js";
import { sig6 } from "./format.js";
import { renderEvaluationHtml, selectionText } from "./render.js";
import {
  ConsoleState,
  applyApiError,
  applyEvaluation,
  applySelection,
  applySweep,
  initialState,
  markStale,
  setSlider,
  sliderChanged,
  weightsOf,
} from "./state.js";
import { validateRequest } from "./validation.js";

let state: ConsoleState = initialState();

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

function clientConfig() {
  return { baseUrl: ($("base-url") as HTMLInputElement).value.replace(/\/$/, "") };
}

const CONTEXT_FIELDS = [
  "n_nodes", "network_radius", "tx_range", "pkt_rate", "bandwidth", "msg_len",
];

function readContext(): Record<string, unknown> {
  const ctx: Record<string, unknown> = {};
  for (const field of CONTEXT_FIELDS) {
    const input = $(`ctx-${field}`) as HTMLInputElement;
    if (input.value.trim() !== "") ctx[field] = Number(input.value);
  }
  return ctx;
}

function readRequirements(): string[] {
  return Array.from(
    document.querySelectorAll<HTMLInputElement>("#requirements input:checked"),
  ).map((box) => box.value);
}

function requestBody() {
  return {
    context: readContext(),
    profile: {},
    weights: weightsOf(state),
  };
}

function showFieldErrors() {
  for (const field of CONTEXT_FIELDS) {
    const input = $(`ctx-${field}`) as HTMLInputElement;
    const note = $(`err-${field}`);
    const message = state.fieldErrors.get(field) ?? null;
    input.classList.toggle("invalid", message !== null);
    note.textContent = message ?? "";
  }
  $("global-error").textContent = state.lastError ?? "";
}

function redraw() {
  $("stale-banner").style.display = state.stale ? "block" : "none";
  if (state.evaluation) {
    $("cards").innerHTML = renderEvaluationHtml(state.evaluation);
  }
  if (state.selection) {
    $("selection").textContent = selectionText(state.selection);
  }
  $("chart").innerHTML = chartSvg(state.sweepData);
  const w = weightsOf(state);
  $("alpha-view").textContent = `alpha ${sig6(w.alpha)} / beta ${sig6(w.beta)}`;
  showFieldErrors();
}

const runEvaluate = latestWins(async () => {
  const body = requestBody();
  const problems = validateRequest(body);
  if (problems.size > 0) {
    state = applyApiError(
      state, "fix the highlighted fields",
      Array.from(problems, ([field, msg]) => `${field}: ${msg}`),
    );
    redraw();
    return undefined;
  }
  try {
    const data = await evaluate(clientConfig(), body);
    state = applyEvaluation(state, data);
  } catch (err) {
    state = err instanceof ApiError
      ? applyApiError(state, err.message, err.violations)
      : markStale(state);
  }
  redraw();
  return undefined;
});

const runSelect = latestWins(async () => {
  const body = { ...requestBody(), requirements: readRequirements() };
  try {
    const data = await select(clientConfig(), body);
    state = applySelection(state, data);
  } catch (err) {
    state = err instanceof ApiError
      ? applyApiError(state, err.message, err.violations)
      : markStale(state);
  }
  redraw();
  return undefined;
});

const runSweep = latestWins(async () => {
  const body = {
    ...requestBody(),
    axis: ($("sweep-axis") as HTMLSelectElement).value,
    from: Number(($("sweep-from") as HTMLInputElement).value),
    to: Number(($("sweep-to") as HTMLInputElement).value),
    steps: Number(($("sweep-steps") as HTMLInputElement).value),
  };
  try {
    const data = await sweep(clientConfig(), body);
    state = applySweep(state, data);
  } catch (err) {
    state = err instanceof ApiError
      ? applyApiError(state, err.message, err.violations)
      : markStale(state);
  }
  redraw();
  return undefined;
});

const debouncedEvaluate = debounce(() => void runEvaluate(), DEBOUNCE_MS);

function onSliderInput() {
  const alpha = Number(($("alpha-slider") as HTMLInputElement).value);
  if (!sliderChanged(state, alpha)) return; // resting slider: no request
  state = setSlider(state, alpha);
  redraw();
  debouncedEvaluate.call();
}

async function loadRequirements() {
  try {
    const doc = await registry(clientConfig());
    $("requirements").innerHTML = doc.requirements
      .map(
        (r) =>
          `<label title="${r.description}">` +
          `<input type="checkbox" value="${r.id}"> ${r.id}</label>`,
      )
      .join("");
  } catch {
    state = markStale(state);
    redraw();
  }
}

function wire() {
  $("alpha-slider").addEventListener("input", onSliderInput);
  $("btn-evaluate").addEventListener("click", () => void runEvaluate());
  $("btn-select").addEventListener("click", () => void runSelect());
  $("btn-sweep").addEventListener("click", () => void runSweep());
  $("btn-reload-registry").addEventListener("click", () => void loadRequirements());
  void loadRequirements();
  void runEvaluate();
}

document.addEventListener("DOMContentLoaded", wire);
