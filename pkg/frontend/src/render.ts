/**
 * Pure rendering: service responses in, display structures and text out.
 * The ranking/protocol text reproduces the CLI's select output byte for
 * byte (fixture-pinned), keeping the console and CLI interchangeable.
 */

import { sig6 } from "./format.js";
import type { EvaluateData, EvaluationDoc, SelectData } from "./types.js";

const BREAKDOWN: [keyof NonNullable<EvaluationDoc["energy"]>, string][] = [
  ["collision", "collision"],
  ["overhearing", "overhearing"],
  ["idle_listening", "idle listening"],
  ["overhead", "overhead"],
];

export interface BreakdownBar {
  cause: string;
  value: string;
  share: number; // 0..1 of the category total
}

export interface CategoryCard {
  category: string;
  rank: number | null;
  cpf: string | null;
  delay: string | null;
  totalEnergy: string | null;
  bars: BreakdownBar[];
  best: boolean;
  tied: boolean;
  error: string | null;
}

/** Ranked category cards; errored categories stay visible but unranked. */
export function evaluationCards(data: EvaluateData): CategoryCard[] {
  const ranked = data.ranking;
  const tiedSet = new Set(data.ties.flat());
  const cards = data.evaluations.map((ev): CategoryCard => {
    if (ev.error !== null || ev.energy === null || ev.cpf === null) {
      return {
        category: ev.category, rank: null, cpf: null, delay: null,
        totalEnergy: null, bars: [], best: false, tied: false,
        error: ev.error ?? "not evaluated",
      };
    }
    const total = ev.energy.total;
    return {
      category: ev.category,
      rank: ranked.indexOf(ev.category) + 1 || null,
      cpf: sig6(ev.cpf),
      delay: ev.delay === null ? null : sig6(ev.delay),
      totalEnergy: sig6(total),
      bars: BREAKDOWN.map(([key, label]) => ({
        cause: label,
        value: sig6(ev.energy![key]),
        share: total > 0 ? ev.energy![key] / total : 0,
      })),
      best: ev.category === data.best_category,
      tied: tiedSet.has(ev.category),
      error: null,
    };
  });
  cards.sort((a, b) => (a.rank ?? 99) - (b.rank ?? 99));
  return cards;
}

/** The CLI `select` output, reproduced from the service response. */
export function selectionText(data: SelectData): string {
  const lines = ["rank category cpf"];
  const ok = data.evaluations.filter((ev) => ev.error === null);
  ok.sort((a, b) => (b.cpf ?? -Infinity) - (a.cpf ?? -Infinity));
  ok.forEach((ev, i) => lines.push(`${i + 1} ${ev.category} ${sig6(ev.cpf!)}`));
  for (const ev of data.evaluations) {
    if (ev.error !== null) lines.push(`- ${ev.category} error: ${ev.error}`);
  }
  lines.push(`selected category: ${data.best_category}`);
  lines.push(`selected protocols: ${data.protocols.join(", ")}`);
  for (const w of data.warnings) lines.push(`warning: ${w}`);
  return lines.join("\n") + "\n";
}

export function cardHtml(card: CategoryCard): string {
  if (card.error !== null) {
    return (
      `<div class="card error" data-category="${card.category}">` +
      `<h3>${card.category}</h3><p class="error">${card.error}</p></div>`
    );
  }
  const bars = card.bars
    .map(
      (b) =>
        `<div class="bar"><span class="bar-label">${b.cause}</span>` +
        `<span class="bar-fill" style="width:${(b.share * 100).toFixed(1)}%"></span>` +
        `<span class="bar-value">${b.value} W</span></div>`,
    )
    .join("");
  const badge = card.best ? '<span class="badge">best</span>' : "";
  const tie = card.tied ? '<span class="badge tie">tie</span>' : "";
  return (
    `<div class="card${card.best ? " best" : ""}" data-category="${card.category}">` +
    `<h3>#${card.rank} ${card.category} ${badge}${tie}</h3>` +
    `<p class="cpf">CPF ${card.cpf}</p>` +
    `<p>energy ${card.totalEnergy} W &middot; delay ${card.delay} s</p>` +
    `<div class="bars">${bars}</div></div>`
  );
}

export function renderEvaluationHtml(data: EvaluateData): string {
  return evaluationCards(data).map(cardHtml).join("\n");
}
