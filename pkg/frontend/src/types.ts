/**
 * Wire types mirroring the peerbargain API: scenario specs go up,
 * evaluation results come down. The client never computes model numbers
 * itself; every displayed value originates in one of these payloads.
 */

export interface PairRef {
  isp: string;
  csp: string;
}

export interface EventSpec extends PairRef {
  services: string[];
}

export interface ScenarioOverrides {
  beta?: number;
  theta?: number;
  uplift?: string;
  cdn_enabled?: boolean;
  cdn_unit_cost_usd_per_gbps_month?: number;
  service_subset?: string[];
  isp_profit_attribution?: boolean;
}

export interface ScenarioSpec {
  schema_version: number;
  dataset: string;
  overrides: ScenarioOverrides;
  events: EventSpec[];
  focal: PairRef;
  sweeps?: { beta?: number[]; theta?: number[] };
  orderings?: number[][];
  compare_isps?: string[];
}

export interface Settlement {
  isp: string;
  csp: string;
  premium_services: string[];
  pre_traffic_gbps: number;
  pre_premium_traffic_gbps: number;
  post_premium_traffic_gbps: number;
  post_besteffort_traffic_gbps: number;
  isp_population_before: number;
  isp_population_after: number;
  isp_profit_before_usd_per_month: number;
  isp_profit_after_usd_per_month: number;
  csp_profit_before_usd_per_month: number;
  csp_profit_after_usd_per_month: number;
  surplus_usd_per_month: number;
  payment_usd_per_month: number;
  deal: boolean;
}

export interface FlowByPair {
  from_isp: string;
  to_isp: string;
  amount: number;
}

export interface FlowByProvider {
  from_provider: string;
  to_provider: string;
  service: string;
  amount: number;
}

export interface EventSummary {
  isp: string;
  csp: string;
  services: string[];
  phase1_total: number;
  phase2_total: number;
  phase1_by_pair: FlowByPair[];
  phase2_by_provider: FlowByProvider[];
}

export interface PerServiceRow {
  service: string;
  payment_usd_per_month: number;
  deal: boolean;
  pre_gbps: number;
  post_gbps: number;
  bandwidth_price_usd_per_gbps_month: number | null;
  price_defined: boolean;
}

export interface RunResult {
  kind: 'run';
  dataset: string;
  focal: PairRef;
  overrides: ScenarioOverrides & Record<string, unknown>;
  events: EventSummary[];
  settlement: Settlement;
  per_service: PerServiceRow[];
}

export interface SweepRow {
  beta: number | null;
  theta: number | null;
  payment_usd_per_month: number;
  surplus_usd_per_month: number;
  deal: boolean;
}

export interface SweepResult {
  kind: 'sweep';
  dataset: string;
  focal: PairRef;
  axes: { beta: number[] | null; theta: number[] | null };
  rows: SweepRow[];
}

export interface TimingRow {
  order: number[];
  events: PairRef[];
  focal_position: number;
  isp_profit_after_usd_per_month: number;
  payment_usd_per_month: number;
  deal: boolean;
}

export interface TimingResult {
  kind: 'timing';
  dataset: string;
  focal: PairRef;
  orderings: TimingRow[];
}

/** Subset of the dataset document the explorer needs. */
export interface DatasetInfo {
  id: string;
  services: { id: string; importance_weight: number }[];
  isps: { id: string; subscribers: number; can_peer: boolean }[];
  csps: { id: string; service_shares: Record<string, number> }[];
  uplift_scenarios: Record<string, unknown>;
  loyalty_bounds: {
    beta_low: number;
    beta_high: number;
    theta_low: number;
    theta_high: number;
  };
}

export interface ApiError {
  code: string;
  message: string;
  details: string[];
}
