/**
 * Explorer state and its pure transitions.
 *
 * The state captures every lever the UI exposes; `buildSpec` is the single
 * place that turns levers into the scenario document the API (and the CLI)
 * consume, so a given lever setting always maps to the identical spec.
 */

import type { DatasetInfo, EventSpec, PairRef, RunResult, ScenarioSpec } from './types.js';

export type UpliftName = 'none' | 'conservative' | 'optimistic';

export interface ExplorerState {
  datasetId: string;
  focal: PairRef;
  beta: number;
  theta: number;
  uplift: UpliftName;
  cdnEnabled: boolean;
  services: string[];
  eventOrder: PairRef[];
  lastResult: RunResult | null;
}

const clamp01 = (value: number) => Math.min(1, Math.max(0, value));

/** Sliders snap to 0.01 to keep specs (and URLs) tidy. */
export function snapLoyalty(value: number): number {
  return Math.round(clamp01(value) * 100) / 100;
}

export function offeredServices(dataset: DatasetInfo, cspId: string): string[] {
  const csp = dataset.csps.find((c) => c.id === cspId);
  if (!csp) return [];
  return dataset.services.map((s) => s.id).filter((sid) => (csp.service_shares[sid] ?? 0) > 0);
}

function samePair(a: PairRef, b: PairRef): boolean {
  return a.isp === b.isp && a.csp === b.csp;
}

/** Competitors that could plausibly race the focal ISP to the same CSP. */
export function defaultEventOrder(dataset: DatasetInfo, focal: PairRef): PairRef[] {
  const rivals = dataset.isps
    .filter((i) => i.can_peer && i.id !== focal.isp)
    .map((i) => ({ isp: i.id, csp: focal.csp }));
  return [focal, ...rivals];
}

export function initialState(dataset: DatasetInfo, focal: PairRef): ExplorerState {
  return {
    datasetId: dataset.id,
    focal,
    beta: 1.0,
    theta: 1.0,
    uplift: 'optimistic',
    cdnEnabled: false,
    services: offeredServices(dataset, focal.csp),
    eventOrder: [focal],
    lastResult: null,
  };
}

export function setFocal(state: ExplorerState, dataset: DatasetInfo, focal: PairRef): ExplorerState {
  return {
    ...state,
    focal,
    services: offeredServices(dataset, focal.csp),
    eventOrder: [focal],
    lastResult: null,
  };
}

export function setBeta(state: ExplorerState, value: number): ExplorerState {
  return { ...state, beta: snapLoyalty(value) };
}

export function setTheta(state: ExplorerState, value: number): ExplorerState {
  return { ...state, theta: snapLoyalty(value) };
}

export function setUplift(state: ExplorerState, uplift: UpliftName): ExplorerState {
  return { ...state, uplift };
}

export function setCdn(state: ExplorerState, enabled: boolean): ExplorerState {
  return { ...state, cdnEnabled: enabled };
}

export function toggleService(state: ExplorerState, dataset: DatasetInfo, serviceId: string): ExplorerState {
  const offered = offeredServices(dataset, state.focal.csp);
  const selected = new Set(state.services);
  if (selected.has(serviceId)) {
    selected.delete(serviceId);
  } else if (offered.includes(serviceId)) {
    selected.add(serviceId);
  }
  // dataset order, never selection order
  return { ...state, services: offered.filter((sid) => selected.has(sid)) };
}

export function addRivalEvent(state: ExplorerState, rival: PairRef): ExplorerState {
  if (state.eventOrder.some((p) => samePair(p, rival))) return state;
  return { ...state, eventOrder: [...state.eventOrder, rival] };
}

export function removeEvent(state: ExplorerState, index: number): ExplorerState {
  const target = state.eventOrder[index];
  if (!target || samePair(target, state.focal)) return state; // the focal pair always stays
  return { ...state, eventOrder: state.eventOrder.filter((_, i) => i !== index) };
}

/** Reorder by permutation; anything that is not a permutation is ignored. */
export function reorderEvents(state: ExplorerState, newOrder: number[]): ExplorerState {
  const sorted = [...newOrder].sort((a, b) => a - b);
  if (
    sorted.length !== state.eventOrder.length ||
    sorted.some((value, index) => value !== index)
  ) {
    return state;
  }
  return { ...state, eventOrder: newOrder.map((i) => state.eventOrder[i]!) };
}

export function moveEvent(state: ExplorerState, from: number, to: number): ExplorerState {
  if (from === to || from < 0 || to < 0) return state;
  if (from >= state.eventOrder.length || to >= state.eventOrder.length) return state;
  const order = state.eventOrder.map((_, i) => i);
  const [moved] = order.splice(from, 1);
  order.splice(to, 0, moved!);
  return reorderEvents(state, order);
}

export function focalPosition(state: ExplorerState): number {
  return state.eventOrder.findIndex((p) => samePair(p, state.focal));
}

/** The scenario document for the current levers; identical to a CLI spec file. */
export function buildSpec(state: ExplorerState): ScenarioSpec {
  const events: EventSpec[] = state.eventOrder.map((pair) => ({
    isp: pair.isp,
    csp: pair.csp,
    services: [...state.services],
  }));
  const spec: ScenarioSpec = {
    schema_version: 1,
    dataset: state.datasetId,
    overrides: {
      beta: state.beta,
      theta: state.theta,
      uplift: state.uplift,
    },
    events,
    focal: { ...state.focal },
  };
  if (state.cdnEnabled) {
    spec.overrides.cdn_enabled = true;
  }
  return spec;
}

/** Timing request: the current ordering against the focal-first ordering. */
export function buildTimingSpec(state: ExplorerState): ScenarioSpec {
  const spec = buildSpec(state);
  const identity = state.eventOrder.map((_, i) => i);
  const focalIndex = focalPosition(state);
  const focalFirst = [focalIndex, ...identity.filter((i) => i !== focalIndex)];
  spec.orderings = [identity, focalFirst];
  return spec;
}

/** Sweep request over the CSP-loyalty axis at the current beta. */
export function buildSweepSpec(state: ExplorerState, thetaGrid: number[]): ScenarioSpec {
  const spec = buildSpec(state);
  delete spec.overrides.theta;
  spec.sweeps = { theta: thetaGrid };
  return spec;
}
