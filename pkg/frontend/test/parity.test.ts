/**
 * CLI/UI parity: the video-only Comcast-Google scenario set through the UI
 * levers produces the identical spec the CLI consumed, and the payment the
 * UI formats equals the CLI result to the cent.  The fixtures are the actual
 * CLI outputs checked in next to this file; with PEERBARGAIN_API set the
 * same assertions also run against a live server.
 */

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { ExplorerController } from '../src/controller.js';
import { sweepToCsv } from '../src/csv.js';
import { formatMoney } from '../src/format.js';
import { buildSpec, initialState, toggleService } from '../src/state.js';
import type { DatasetInfo, RunResult, SweepResult, TimingResult } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));
const read = (name: string) => readFileSync(join(here, 'fixtures', name), 'utf8');
const fixture = (name: string) => JSON.parse(read(name));

const dataset: DatasetInfo = {
  id: 'us2013',
  services: [
    { id: 'user_centric_video', importance_weight: 0.1469 },
    { id: 'osn', importance_weight: 0.1895 },
    { id: 'search', importance_weight: 0.0836 },
    { id: 'gaming', importance_weight: 0.0927 },
    { id: 'commercial_video', importance_weight: 0.4873 },
  ],
  isps: [{ id: 'comcast', subscribers: 19025000, can_peer: true }],
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
const cliRun = fixture('cli-run-comcast-google-video.json') as RunResult;
const cliSweep = fixture('cli-sweep-search.json') as SweepResult;

function videoOnlyState() {
  let state = initialState(dataset, focal);
  for (const svc of ['osn', 'search', 'gaming']) {
    state = toggleService(state, dataset, svc);
  }
  return state;
}

describe('UI round-trip against CLI output', () => {
  it('the levers assemble the very spec the CLI consumed', () => {
    expect(buildSpec(videoOnlyState())).toEqual(fixture('spec-comcast-google-video.json'));
  });

  it('displays the CLI payment to the cent', async () => {
    const serve = (url: string, init?: RequestInit): Promise<Response> => {
      const spec = init?.body ? JSON.parse(init.body as string) : null;
      if (url.includes('scenarios:run')) {
        // the fixture is the CLI's byte-exact result for this spec
        expect(spec).toEqual(fixture('spec-comcast-google-video.json'));
        return Promise.resolve(new Response(read('cli-run-comcast-google-video.json')));
      }
      if (url.includes('sweeps')) {
        return Promise.resolve(new Response(read('cli-sweep-search.json')));
      }
      return Promise.resolve(new Response(read('cli-timing-focal-last.json')));
    };
    const controller = new ExplorerController(new ApiClient('http://test', serve), videoOnlyState());
    await controller.evaluate();
    const shown = controller.snapshot().result!.settlement.payment_usd_per_month;
    expect(formatMoney(shown)).toBe(formatMoney(cliRun.settlement.payment_usd_per_month));
    expect(formatMoney(shown)).toBe('$179,264.19');
  });
});

describe('sweep CSV download', () => {
  it('is byte-identical to the CLI CSV', () => {
    expect(sweepToCsv(cliSweep)).toBe(read('cli-sweep-search.csv'));
  });
});

const liveBase = process.env.PEERBARGAIN_API;

describe.skipIf(!liveBase)('live server parity', () => {
  it('returns the same payment the fixtures recorded', async () => {
    const api = new ApiClient(liveBase!, (url, init) => fetch(url, init));
    const result = await api.runScenario(buildSpec(videoOnlyState()));
    expect(formatMoney(result.settlement.payment_usd_per_month)).toBe(
      formatMoney(cliRun.settlement.payment_usd_per_month),
    );
  });
});
