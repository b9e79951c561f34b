/**
 * Interaction tests for the evaluation round-trip: stale responses are
 * discarded, superseded rounds lose even when the transport cannot cancel
 * them, and the timing badge mirrors the ordering table.
 */

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { ExplorerController } from '../src/controller.js';
import { initialState, setBeta, toggleService } from '../src/state.js';
import type { DatasetInfo, RunResult, SweepResult, TimingResult } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));
const fixture = (name: string) => JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf8'));

const dataset: DatasetInfo = {
  id: 'us2013',
  services: [
    { id: 'user_centric_video', importance_weight: 0.1469 },
    { id: 'osn', importance_weight: 0.1895 },
    { id: 'search', importance_weight: 0.0836 },
    { id: 'gaming', importance_weight: 0.0927 },
    { id: 'commercial_video', importance_weight: 0.4873 },
  ],
  isps: [
    { id: 'comcast', subscribers: 19025000, can_peer: true },
    { id: 'time_warner', subscribers: 11306000, can_peer: true },
  ],
  csps: [
    {
      id: 'google',
      service_shares: { user_centric_video: 0.3939, osn: 0.2884, search: 0.6916, gaming: 0.2 },
    },
  ],
  uplift_scenarios: { none: {}, conservative: {}, optimistic: {} },
  loyalty_bounds: { beta_low: 0.77, beta_high: 0.95, theta_low: 0.36, theta_high: 0.8 },
};

const focal = { isp: 'comcast', csp: 'google' };
const runFixture = fixture('cli-run-comcast-google-video.json') as RunResult;
const sweepFixture = fixture('cli-sweep-search.json') as SweepResult;
const timingFixture = fixture('cli-timing-focal-last.json') as TimingResult;

type Deferred = { resolve: (value: Response) => void; body: unknown };

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { 'content-type': 'application/json' },
  });
}

/** Fetch stub that records requests and lets the test resolve them manually. */
function manualFetch() {
  const pending: { url: string; spec: any; deferred: Deferred }[] = [];
  const impl = (url: string, init?: RequestInit): Promise<Response> =>
    new Promise((resolve) => {
      pending.push({
        url,
        spec: init?.body ? JSON.parse(init.body as string) : null,
        deferred: { resolve, body: null },
      });
    });
  return { impl, pending };
}

function payloadFor(url: string, spec: any): unknown {
  if (url.includes('scenarios:run')) {
    // echo the requested beta through so responses are distinguishable
    const result = structuredClone(runFixture);
    result.overrides.beta = spec.overrides.beta;
    result.settlement.payment_usd_per_month = 1000 * (spec.overrides.beta ?? 0);
    return result;
  }
  if (url.includes('sweeps')) return sweepFixture;
  if (url.includes('timing')) return timingFixture;
  throw new Error(`unexpected url: ${url}`);
}

function autoFetch() {
  return (url: string, init?: RequestInit): Promise<Response> => {
    const spec = init?.body ? JSON.parse(init.body as string) : null;
    return Promise.resolve(jsonResponse(payloadFor(url, spec)));
  };
}

describe('evaluation round', () => {
  it('applies run, sweep, and timing payloads', async () => {
    const controller = new ExplorerController(
      new ApiClient('http://test', autoFetch()),
      initialState(dataset, focal),
    );
    await controller.evaluate();
    const snapshot = controller.snapshot();
    expect(snapshot.pending).toBe(false);
    expect(snapshot.error).toBeNull();
    expect(snapshot.result?.settlement.deal).toBe(true);
    expect(snapshot.sweep?.rows).toHaveLength(6);
  });

  it('reports API failures without clobbering state', async () => {
    const failing = () =>
      Promise.resolve(
        new Response(JSON.stringify({ code: 'validation_failed', message: 'bad', details: [] }), {
          status: 422,
        }),
      );
    const controller = new ExplorerController(
      new ApiClient('http://test', failing),
      initialState(dataset, focal),
    );
    await controller.evaluate();
    const snapshot = controller.snapshot();
    expect(snapshot.error).toContain('validation_failed');
    expect(snapshot.result).toBeNull();
    expect(snapshot.pending).toBe(false);
  });
});

describe('stale response discarding', () => {
  it('a slow older response never overwrites a newer one', async () => {
    const { impl, pending } = manualFetch();
    const controller = new ExplorerController(
      new ApiClient('http://test', impl),
      setBeta(initialState(dataset, focal), 0.2),
    );
    const arrived = async (count: number) => {
      for (let i = 0; pending.length < count && i < 100; i++) {
        await new Promise((r) => setTimeout(r));
      }
      expect(pending.length).toBeGreaterThanOrEqual(count);
    };

    const first = controller.evaluate();                     // seq 1, beta 0.2
    expect(pending).toHaveLength(1);
    const second = controller.apply((s) => setBeta(s, 0.9)); // seq 2, beta 0.9
    expect(pending).toHaveLength(2);

    // resolve the NEWER round fully first: its run, then its sweep
    const newerRun = pending[1]!;
    newerRun.deferred.resolve(jsonResponse(payloadFor(newerRun.url, newerRun.spec)));
    await arrived(3);
    const newerSweep = pending[2]!;
    expect(newerSweep.url).toContain('sweeps');
    newerSweep.deferred.resolve(jsonResponse(payloadFor(newerSweep.url, newerSweep.spec)));
    await second;
    expect(controller.snapshot().result?.settlement.payment_usd_per_month).toBe(900);

    // now the stale run (seq 1) finally lands; its whole round is dropped
    // without even issuing its follow-up requests
    const stalerRun = pending[0]!;
    stalerRun.deferred.resolve(jsonResponse(payloadFor(stalerRun.url, stalerRun.spec)));
    await first;
    expect(pending).toHaveLength(3);
    const snapshot = controller.snapshot();
    expect(snapshot.result?.settlement.payment_usd_per_month).toBe(900);
    expect(snapshot.result?.overrides.beta).toBe(0.9);
    expect(snapshot.pending).toBe(false);
  });

  it('rapid lever changes leave the last request winning', async () => {
    const controller = new ExplorerController(
      new ApiClient('http://test', autoFetch()),
      initialState(dataset, focal),
    );
    await Promise.all([
      controller.apply((s) => setBeta(s, 0.1)),
      controller.apply((s) => setBeta(s, 0.5)),
      controller.apply((s) => setBeta(s, 0.8)),
    ]);
    expect(controller.snapshot().result?.settlement.payment_usd_per_month).toBe(800);
  });
});

describe('timing badge', () => {
  it('single-event scenarios are first movers by definition', async () => {
    const controller = new ExplorerController(
      new ApiClient('http://test', autoFetch()),
      initialState(dataset, focal),
    );
    await controller.evaluate();
    const badge = controller.snapshot().timing;
    expect(badge?.focalPosition).toBe(0);
    expect(badge?.profitNow).toBe(badge?.profitIfFirst);
  });

  it('mirrors the ordering table when the focal event moves late', async () => {
    let state = initialState(dataset, focal);
    state = { ...state, eventOrder: [{ isp: 'time_warner', csp: 'google' }, focal] };
    const controller = new ExplorerController(new ApiClient('http://test', autoFetch()), state);
    await controller.evaluate();
    const badge = controller.snapshot().timing!;
    const [current, focalFirst] = timingFixture.orderings;
    expect(badge.profitNow).toBe(current!.isp_profit_after_usd_per_month);
    expect(badge.profitIfFirst).toBe(focalFirst!.isp_profit_after_usd_per_month);
    expect(badge.paymentNow).toBe(current!.payment_usd_per_month);
    expect(badge.paymentIfFirst).toBe(focalFirst!.payment_usd_per_month);
    // the conservative position costs profit and earns a higher payment
    expect(badge.profitNow).toBeLessThan(badge.profitIfFirst);
    expect(badge.paymentNow).toBeGreaterThan(badge.paymentIfFirst);
  });
});

describe('service toggles re-enter the spec', () => {
  it('requests carry the current selection', async () => {
    const requests: any[] = [];
    const recorder = (url: string, init?: RequestInit) => {
      const spec = init?.body ? JSON.parse(init.body as string) : null;
      requests.push({ url, spec });
      return Promise.resolve(jsonResponse(payloadFor(url, spec)));
    };
    const controller = new ExplorerController(
      new ApiClient('http://test', recorder),
      initialState(dataset, focal),
    );
    await controller.apply((s) => toggleService(s, dataset, 'osn'));
    const runRequest = requests.find((r) => r.url.includes('scenarios:run'));
    expect(runRequest.spec.events[0].services).toEqual([
      'user_centric_video',
      'search',
      'gaming',
    ]);
  });
});
