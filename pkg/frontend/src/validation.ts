/**
 * Client-side validation mirroring the service rules, so the form rejects
 * exactly the inputs the server would 422. Parity with the live service is
 * pinned by fixture tests; when a rule changes server-side, regenerate the
 * fixtures and update this mirror.
 */

export const DEFAULT_CONTEXT = {
  n_nodes: 100,
  network_radius: 100.0,
  tx_range: 20.0,
  pkt_rate: 20.0,
  bandwidth: 256000.0,
  msg_len: 1024,
  sched: {
    frame_len: 0.25,
    guard: 0.001,
    slot_len: 0.01,
    sync_len: 256,
    ack_len: 256,
    sync_interval: 48.0,
  },
  cap: {
    duty_cycle: 0.1,
    rts_len: 256,
    cts_len: 256,
    ack_len: 256,
    sync_len: 256,
    cw_min: 128,
    backoff_stages: 5,
    sync_interval: 10.0,
    service_rate_mode: "bandwidth",
  },
  psp: {
    preamble_len: 12800,
    check_dur: 0.001,
    check_interval: 0.05,
  },
};

export const DEFAULT_PROFILE = {
  e_elec: 5e-8,
  amp_fs: 1e-11,
  amp_mp: 1.3e-15,
  p_idle: 0.05,
  e_on: 1e-6,
  e_off: 1e-6,
};

type Doc = Record<string, unknown>;

const CONTEXT_SECTIONS = ["sched", "cap", "psp"];

function mergeContext(partial: Doc): { merged: Doc; unknown: string[] } {
  const merged: Doc = { ...DEFAULT_CONTEXT };
  const unknown: string[] = [];
  for (const [key, value] of Object.entries(partial)) {
    if (!(key in DEFAULT_CONTEXT)) {
      unknown.push(key);
      continue;
    }
    if (CONTEXT_SECTIONS.includes(key)) {
      const section: Doc = {
        ...(DEFAULT_CONTEXT as Doc)[key] as Doc,
      };
      for (const [k, v] of Object.entries(value as Doc)) {
        if (!(k in section)) {
          unknown.push(`${key}.${k}`);
          continue;
        }
        section[k] = v;
      }
      merged[key] = section;
    } else {
      merged[key] = value;
    }
  }
  return { merged, unknown };
}

/** Validation messages keyed by field path; empty map means acceptable. */
export function validateContext(partial: Doc): Map<string, string> {
  const out = new Map<string, string>();
  const { merged, unknown } = mergeContext(partial);
  for (const key of unknown) out.set(key, "unknown field");
  const c = merged as typeof DEFAULT_CONTEXT;

  if (!(c.n_nodes >= 1)) out.set("n_nodes", "must be >= 1");
  if (!(c.network_radius > 0)) out.set("network_radius", "must be > 0");
  if (!(c.tx_range > 0)) out.set("tx_range", "must be > 0");
  if (!(c.pkt_rate >= 0)) out.set("pkt_rate", "must be >= 0");
  if (!(c.bandwidth > 0)) out.set("bandwidth", "must be > 0");
  if (!(c.msg_len > 0)) out.set("msg_len", "must be > 0");

  const s = c.sched;
  if (!(s.frame_len > 0)) out.set("sched.frame_len", "must be > 0");
  else if (!(s.slot_len > 0 && s.slot_len <= s.frame_len)) {
    out.set("sched.slot_len", "must satisfy 0 < slot_len <= frame_len");
  }
  if (!(s.guard >= 0)) out.set("sched.guard", "must be >= 0");
  if (!(s.sync_len > 0)) out.set("sched.sync_len", "must be > 0");
  if (!(s.ack_len > 0)) out.set("sched.ack_len", "must be > 0");
  if (!(s.sync_interval > 0)) out.set("sched.sync_interval", "must be > 0");

  const cap = c.cap;
  if (!(cap.duty_cycle > 0 && cap.duty_cycle <= 1)) {
    out.set("cap.duty_cycle", "must be in (0, 1]");
  }
  if (!(cap.cw_min >= 2)) out.set("cap.cw_min", "must be >= 2");
  if (!(cap.backoff_stages >= 0)) out.set("cap.backoff_stages", "must be >= 0");
  for (const field of ["rts_len", "cts_len", "ack_len", "sync_len"] as const) {
    if (!(cap[field] > 0)) out.set(`cap.${field}`, "must be > 0");
  }
  if (!(cap.sync_interval > 0)) out.set("cap.sync_interval", "must be > 0");
  if (cap.service_rate_mode !== "bandwidth" && cap.service_rate_mode !== "packets") {
    out.set("cap.service_rate_mode", "must be 'bandwidth' or 'packets'");
  }

  const p = c.psp;
  if (!(p.preamble_len > 0)) out.set("psp.preamble_len", "must be > 0");
  if (!(p.check_dur > 0 && p.check_dur <= p.check_interval)) {
    out.set("psp.check_dur", "must satisfy 0 < check_dur <= check_interval");
  }
  if (c.bandwidth > 0 && p.preamble_len / c.bandwidth < p.check_interval) {
    out.set("psp.preamble_len",
      "preamble_len/bandwidth must be >= check_interval");
  }
  return out;
}

export function validateProfile(partial: Doc): Map<string, string> {
  const out = new Map<string, string>();
  const merged: Doc = { ...DEFAULT_PROFILE };
  for (const [key, value] of Object.entries(partial)) {
    if (!(key in DEFAULT_PROFILE)) {
      out.set(`profile.${key}`, "unknown field");
      continue;
    }
    merged[key] = value;
  }
  for (const [key, value] of Object.entries(merged)) {
    if (!((value as number) >= 0)) out.set(`profile.${key}`, "must be >= 0");
  }
  return out;
}

export function validateWeights(w: { alpha?: number; beta?: number }): Map<string, string> {
  const out = new Map<string, string>();
  const alpha = w.alpha ?? 10 / 11;
  const beta = w.beta ?? 1 / 11;
  if (alpha < 0 || beta < 0 || !(alpha + beta > 0)) {
    out.set("weights", "alpha and beta must be nonnegative with alpha + beta > 0");
  }
  return out;
}

export interface RequestBody {
  context?: Doc;
  profile?: Doc;
  weights?: { alpha?: number; beta?: number };
}

/** Would the service accept this body? Mirrors every 422 rule. */
export function validateRequest(body: RequestBody): Map<string, string> {
  const out = new Map<string, string>();
  for (const [k, v] of validateContext(body.context ?? {})) out.set(k, v);
  for (const [k, v] of validateProfile(body.profile ?? {})) out.set(k, v);
  for (const [k, v] of validateWeights(body.weights ?? {})) out.set(k, v);
  return out;
}
