/**
 * Thin typed client for the peerbargain HTTP API.
 *
 * The base URL resolves at runtime: `?api=` query parameter, then
 * `localStorage.peerbargain_api`, then a `window.__PEERBARGAIN_API__`
 * injected at build/serve time, then the default local server.
 */

import type {
  ApiError,
  DatasetInfo,
  RunResult,
  ScenarioSpec,
  SweepResult,
  TimingResult,
} from './types.js';

export const DEFAULT_API_BASE = 'http://127.0.0.1:8080';

export function resolveApiBase(): string {
  try {
    const fromQuery = new URLSearchParams(window.location.search).get('api');
    if (fromQuery) return fromQuery.replace(/\/$/, '');
    const fromStorage = window.localStorage.getItem('peerbargain_api');
    if (fromStorage) return fromStorage.replace(/\/$/, '');
    const injected = (window as unknown as { __PEERBARGAIN_API__?: string }).__PEERBARGAIN_API__;
    if (injected) return injected.replace(/\/$/, '');
  } catch {
    // non-browser environment; fall through
  }
  return DEFAULT_API_BASE;
}

export class RequestFailed extends Error {
  readonly status: number;
  readonly detail: ApiError | null;

  constructor(status: number, detail: ApiError | null) {
    super(detail ? `${detail.code}: ${detail.message}` : `HTTP ${status}`);
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base: string, fetchImpl: FetchLike = (input, init) => fetch(input, init)) {
    this.base = base.replace(/\/$/, '');
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    if (!response.ok) {
      let detail: ApiError | null = null;
      try {
        detail = (await response.json()) as ApiError;
      } catch {
        detail = null;
      }
      throw new RequestFailed(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, spec: ScenarioSpec, signal?: AbortSignal): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(spec),
      signal,
    });
  }

  listDatasets(): Promise<string[]> {
    return this.request<string[]>('/api/v1/datasets');
  }

  getDataset(id: string): Promise<DatasetInfo> {
    return this.request<DatasetInfo>(`/api/v1/datasets/${encodeURIComponent(id)}`);
  }

  runScenario(spec: ScenarioSpec, signal?: AbortSignal): Promise<RunResult> {
    return this.post<RunResult>('/api/v1/scenarios:run', spec, signal);
  }

  runSweep(spec: ScenarioSpec, signal?: AbortSignal): Promise<SweepResult> {
    return this.post<SweepResult>('/api/v1/sweeps', spec, signal);
  }

  runTiming(spec: ScenarioSpec, signal?: AbortSignal): Promise<TimingResult> {
    return this.post<TimingResult>('/api/v1/timing', spec, signal);
  }
}
