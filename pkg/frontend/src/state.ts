/**
 * Dashboard view state and its URL-hash encoding.
 *
 * The full state round-trips through the hash (deep-linkable):
 * decode(encode(s)) === s for any normalized state. Defaults are omitted
 * from the hash so plain "#" means the repo picker.
 */

export type ActiveView = 'timeline' | 'graph' | 'summary';
export type TimelineMode = 'status' | 'labels';

export interface SummaryFilters {
  bug_only: boolean;
  excluded: string[]; // sorted, deduplicated
  bin: string | null; // "L-U" histogram token
  top: number;
}

export interface ViewState {
  selected_repo: { owner: string; name: string } | null;
  active_view: ActiveView;
  timeline_mode: TimelineMode;
  selected_issue: number | null;
  summary_filters: SummaryFilters;
}

export const DEFAULT_TOP = 5;

export function defaultState(): ViewState {
  return {
    selected_repo: null,
    active_view: 'timeline',
    timeline_mode: 'status',
    selected_issue: null,
    summary_filters: { bug_only: false, excluded: [], bin: null, top: DEFAULT_TOP },
  };
}

/** Enforce invariants: the graph view needs an issue; filters stay canonical. */
export function normalize(state: ViewState): ViewState {
  const excluded = [...new Set(state.summary_filters.excluded)].sort();
  const active =
    state.active_view === 'graph' && state.selected_issue === null
      ? 'timeline'
      : state.active_view;
  return {
    ...state,
    active_view: active,
    summary_filters: { ...state.summary_filters, excluded },
  };
}

export function encodeState(state: ViewState): string {
  const s = normalize(state);
  const params = new URLSearchParams();
  if (s.selected_repo) params.set('r', `${s.selected_repo.owner}/${s.selected_repo.name}`);
  if (s.active_view !== 'timeline') params.set('v', s.active_view);
  if (s.timeline_mode !== 'status') params.set('m', s.timeline_mode);
  if (s.selected_issue !== null) params.set('i', String(s.selected_issue));
  const f = s.summary_filters;
  if (f.bug_only) params.set('bug', '1');
  if (f.excluded.length) {
    params.set('ex', f.excluded.map(encodeURIComponent).join(','));
  }
  if (f.bin !== null) params.set('bin', f.bin);
  if (f.top !== DEFAULT_TOP) params.set('top', String(f.top));
  const query = params.toString();
  return query ? `#${query}` : '#';
}

export function decodeState(hash: string): ViewState {
  const params = new URLSearchParams(hash.replace(/^#/, ''));
  const state = defaultState();

  const repo = params.get('r');
  if (repo) {
    const slash = repo.indexOf('/');
    if (slash > 0) {
      state.selected_repo = { owner: repo.slice(0, slash), name: repo.slice(slash + 1) };
    }
  }
  const view = params.get('v');
  if (view === 'graph' || view === 'summary') state.active_view = view;
  if (params.get('m') === 'labels') state.timeline_mode = 'labels';
  const issue = params.get('i');
  if (issue !== null && /^\d+$/.test(issue)) state.selected_issue = Number(issue);
  state.summary_filters.bug_only = params.get('bug') === '1';
  const excluded = params.get('ex');
  if (excluded) {
    state.summary_filters.excluded = excluded.split(',').map(decodeURIComponent);
  }
  const bin = params.get('bin');
  if (bin && /^\d+-\d+$/.test(bin)) state.summary_filters.bin = bin;
  const top = params.get('top');
  if (top !== null && /^\d+$/.test(top) && Number(top) >= 1) {
    state.summary_filters.top = Number(top);
  }
  return normalize(state);
}
