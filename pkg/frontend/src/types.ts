/** Wire types of the selector service. */

export interface ScheduledParams {
  frame_len: number;
  guard: number;
  slot_len: number;
  sync_len: number;
  ack_len: number;
  sync_interval: number;
}

export interface CapParams {
  duty_cycle: number;
  rts_len: number;
  cts_len: number;
  ack_len: number;
  sync_len: number;
  cw_min: number;
  backoff_stages: number;
  sync_interval: number;
  service_rate_mode: string;
}

export interface PspParams {
  preamble_len: number;
  check_dur: number;
  check_interval: number;
}

export interface NetworkContext {
  n_nodes: number;
  network_radius: number;
  tx_range: number;
  pkt_rate: number;
  bandwidth: number;
  msg_len: number;
  sched: ScheduledParams;
  cap: CapParams;
  psp: PspParams;
}

export interface RadioProfile {
  e_elec: number;
  amp_fs: number;
  amp_mp: number;
  p_idle: number;
  e_on: number;
  e_off: number;
}

export interface Weights {
  alpha: number;
  beta: number;
}

export interface EnergyDoc {
  collision: number;
  overhearing: number;
  idle_listening: number;
  overhead: number;
  total: number;
}

export interface EvaluationDoc {
  category: string;
  error: string | null;
  energy: EnergyDoc | null;
  delay: number | null;
  cpf: number | null;
}

export interface EvaluateData {
  evaluations: EvaluationDoc[];
  ranking: string[];
  best_category: string | null;
  ties: [string, string][];
}

export interface SelectData {
  feasible_categories: string[];
  best_category: string;
  protocols: string[];
  evaluations: EvaluationDoc[];
  warnings: string[];
}

export interface SweepRowDoc {
  axis_value: number;
  category: string;
  error: string | null;
  collision: number | null;
  overhearing: number | null;
  idle: number | null;
  overhead: number | null;
  total_energy: number | null;
  delay: number | null;
  cpf: number | null;
}

export interface SweepData {
  axis: string;
  rows: SweepRowDoc[];
}

export interface RegistryDoc {
  categories: { id: string; representative: string; note: string }[];
  requirements: { id: string; description: string }[];
  protocols: {
    name: string;
    category: string;
    satisfies: string[];
    reviewed_against: string[];
  }[];
}

export interface ApiEnvelope<T> {
  status: "ok" | "error";
  data?: T;
  error?: { message: string; violations?: string[] };
}
