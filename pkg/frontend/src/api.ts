/**
 * Thin client for the selector service. The console performs no model math
 * of its own; every displayed number arrives through these calls.
 */

import type {
  ApiEnvelope,
  EvaluateData,
  RegistryDoc,
  SelectData,
  SweepData,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  violations: string[];

  constructor(status: number, message: string, violations: string[] = []) {
    super(message);
    this.status = status;
    this.violations = violations;
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  const resp = await fetch(`${base}${path}`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  const doc = (await resp.json()) as ApiEnvelope<T>;
  if (doc.status !== "ok" || doc.data === undefined) {
    const err = doc.error ?? { message: `HTTP ${resp.status}` };
    throw new ApiError(resp.status, err.message, err.violations ?? []);
  }
  return doc.data;
}

export interface ClientConfig {
  baseUrl: string;
}

export function evaluate(cfg: ClientConfig, body: unknown): Promise<EvaluateData> {
  return post<EvaluateData>(cfg.baseUrl, "/api/evaluate", body);
}

export function select(cfg: ClientConfig, body: unknown): Promise<SelectData> {
  return post<SelectData>(cfg.baseUrl, "/api/select", body);
}

export function sweep(cfg: ClientConfig, body: unknown): Promise<SweepData> {
  return post<SweepData>(cfg.baseUrl, "/api/sweep", body);
}

export async function registry(cfg: ClientConfig): Promise<RegistryDoc> {
  const resp = await fetch(`${cfg.baseUrl}/api/registry`);
  const doc = (await resp.json()) as ApiEnvelope<RegistryDoc>;
  if (doc.status !== "ok" || doc.data === undefined) {
    const err = doc.error ?? { message: `HTTP ${resp.status}` };
    throw new ApiError(resp.status, err.message, err.violations ?? []);
  }
  return doc.data;
}
