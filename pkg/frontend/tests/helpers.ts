/** Shared test plumbing: recorded API fixtures and a zero-network fetch. */

import { readFileSync } from 'node:fs';
import { join } from 'node:path';

import type { FetchLike } from '../src/api.js';

export function fixture<T>(name: string): T {
  // vitest runs with the package root as cwd; happy-dom rewrites
  // import.meta.url, so resolve from the filesystem instead
  const path = join(process.cwd(), 'tests', 'fixtures', name);
  return JSON.parse(readFileSync(path, 'utf-8')) as T;
}

export interface RecordedFetch {
  fetchFn: FetchLike;
  /** URLs requested, in order; lets tests assert exact query strings. */
  requests: string[];
}

/** Serve recorded payloads by URL prefix match; any miss is a test bug. */
export function recordedFetch(routes: Record<string, unknown>): RecordedFetch {
  const requests: string[] = [];
  const fetchFn: FetchLike = (url: string) => {
    requests.push(url);
    for (const [prefix, payload] of Object.entries(routes)) {
      if (url === prefix || url.startsWith(prefix)) {
        return Promise.resolve({
          ok: true,
          status: 200,
          json: () => Promise.resolve(structuredClone(payload)),
        });
      }
    }
    throw new Error(`unexpected request in test: ${url}`);
  };
  return { fetchFn, requests };
}
