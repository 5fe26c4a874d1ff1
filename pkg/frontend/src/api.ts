/**
 * Thin client for the snapshot API, plus stale-response discarding.
 *
 * Each view owns a RequestGate: requests get monotonically increasing ids
 * and a response is applied only if no newer request has started since,
 * so at most one in-flight response per view ever lands.
 */

import type {
  GraphPayload,
  HistogramBin,
  RepoEntry,
  SummaryPayload,
  TimelinePayload,
} from './types.js';
import type { SummaryFilters, TimelineMode } from './state.js';

export type FetchLike = (url: string) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  repos(): Promise<RepoEntry[]> {
    return this.get('/api/repos');
  }

  timeline(owner: string, name: string, mode: TimelineMode): Promise<TimelinePayload> {
    return this.get(`/api/repos/${enc(owner)}/${enc(name)}/timeline?mode=${mode}`);
  }

  graph(owner: string, name: string, issue: number, seed = 42): Promise<GraphPayload> {
    return this.get(`/api/repos/${enc(owner)}/${enc(name)}/issues/${issue}/graph?seed=${seed}`);
  }

  summary(owner: string, name: string, filters: SummaryFilters): Promise<SummaryPayload> {
    return this.get(
      `/api/repos/${enc(owner)}/${enc(name)}/files/summary${summaryQuery(filters)}`,
    );
  }

  histogram(owner: string, name: string, bugOnly: boolean): Promise<HistogramBin[]> {
    const query = bugOnly ? '?bugOnly=true' : '';
    return this.get(`/api/repos/${enc(owner)}/${enc(name)}/files/histogram${query}`);
  }
}

export function summaryQuery(filters: SummaryFilters): string {
  const params = new URLSearchParams();
  if (filters.bug_only) params.set('bugOnly', 'true');
  if (filters.excluded.length) params.set('exclude', filters.excluded.join(','));
  if (filters.bin !== null) params.set('bin', filters.bin);
  if (filters.top !== 5) params.set('top', String(filters.top));
  const query = params.toString();
  return query ? `?${query}` : '';
}

function enc(part: string): string {
  return encodeURIComponent(part);
}

/** Monotonic request ids; stale responses are dropped, not applied. */
export class RequestGate {
  private current = 0;

  async run<T>(request: () => Promise<T>, apply: (value: T) => void): Promise<boolean> {
    const ticket = ++this.current;
    const value = await request();
    if (ticket !== this.current) return false; // a newer request superseded us
    apply(value);
    return true;
  }
}
