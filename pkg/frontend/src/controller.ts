/**
 * Evaluation orchestration.
 *
 * The controller owns the request lifecycle: every lever change issues a new
 * evaluation, the previous in-flight request is aborted, and responses are
 * stamped with a monotonically increasing sequence number so anything stale
 * is discarded even if the transport could not be cancelled.  The view layer
 * subscribes to snapshots; it never talks to the API directly.
 */

import type { ApiClient } from './api.js';
import type { RunResult, SweepResult, TimingResult } from './types.js';
import type { ExplorerState } from './state.js';
import {
  buildSpec,
  buildSweepSpec,
  buildTimingSpec,
  focalPosition,
} from './state.js';

export interface TimingBadge {
  focalPosition: number;
  profitNow: number;
  profitIfFirst: number;
  paymentNow: number;
  paymentIfFirst: number;
}

export interface Snapshot {
  state: ExplorerState;
  result: RunResult | null;
  sweep: SweepResult | null;
  timing: TimingBadge | null;
  pending: boolean;
  error: string | null;
}

export type Listener = (snapshot: Snapshot) => void;

export const THETA_GRID = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

export class ExplorerController {
  private readonly api: ApiClient;
  private readonly listeners: Listener[] = [];
  private state: ExplorerState;
  private result: RunResult | null = null;
  private sweep: SweepResult | null = null;
  private timing: TimingBadge | null = null;
  private error: string | null = null;
  private issued = 0;      // sequence number of the newest request
  private applied = 0;     // sequence number of the newest applied response
  private inFlight: AbortController | null = null;

  constructor(api: ApiClient, state: ExplorerState) {
    this.api = api;
    this.state = state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.snapshot());
  }

  snapshot(): Snapshot {
    return {
      state: this.state,
      result: this.result,
      sweep: this.sweep,
      timing: this.timing,
      pending: this.issued > this.applied,
      error: this.error,
    };
  }

  private notify(): void {
    const snapshot = this.snapshot();
    for (const listener of this.listeners) listener(snapshot);
  }

  currentState(): ExplorerState {
    return this.state;
  }

  /** Apply a pure state transition and re-evaluate. */
  async apply(transition: (state: ExplorerState) => ExplorerState): Promise<void> {
    const next = transition(this.state);
    if (next === this.state) return;
    this.state = next;
    await this.evaluate();
  }

  /** True once a newer round exists; stale rounds stop and stay silent. */
  private superseded(seq: number, aborter: AbortController): boolean {
    return aborter.signal.aborted || seq < this.issued || seq < this.applied;
  }

  /**
   * Issue the evaluation round for the current state.  At most one round is
   * in flight: newer rounds abort older ones, and a stale response (sequence
   * below the newest issued round) is dropped on arrival even when the
   * transport could not actually cancel it.
   */
  async evaluate(): Promise<void> {
    const seq = ++this.issued;
    this.inFlight?.abort();
    const aborter = new AbortController();
    this.inFlight = aborter;
    this.notify(); // pending

    try {
      const run = await this.api.runScenario(buildSpec(this.state), aborter.signal);
      if (this.superseded(seq, aborter)) return;
      const sweep = await this.api.runSweep(
        buildSweepSpec(this.state, THETA_GRID),
        aborter.signal,
      );
      if (this.superseded(seq, aborter)) return;
      let timing: TimingResult | null = null;
      if (this.state.eventOrder.length > 1) {
        timing = await this.api.runTiming(buildTimingSpec(this.state), aborter.signal);
        if (this.superseded(seq, aborter)) return;
      }
      this.applied = seq;
      this.result = run;
      this.sweep = sweep;
      this.timing = timing ? toBadge(timing) : selfBadge(run, this.state);
      this.error = null;
      this.state = { ...this.state, lastResult: run };
    } catch (err) {
      if (this.superseded(seq, aborter)) return;
      this.applied = seq;
      this.error = err instanceof Error ? err.message : String(err);
    } finally {
      if (this.inFlight === aborter) this.inFlight = null;
      this.notify();
    }
  }
}

function toBadge(timing: TimingResult): TimingBadge {
  const now = timing.orderings[0]!;
  const first = timing.orderings[1]!;
  return {
    focalPosition: now.focal_position,
    profitNow: now.isp_profit_after_usd_per_month,
    profitIfFirst: first.isp_profit_after_usd_per_month,
    paymentNow: now.payment_usd_per_month,
    paymentIfFirst: first.payment_usd_per_month,
  };
}

function selfBadge(run: RunResult, state: ExplorerState): TimingBadge {
  return {
    focalPosition: focalPosition(state),
    profitNow: run.settlement.isp_profit_after_usd_per_month,
    profitIfFirst: run.settlement.isp_profit_after_usd_per_month,
    paymentNow: run.settlement.payment_usd_per_month,
    paymentIfFirst: run.settlement.payment_usd_per_month,
  };
}
