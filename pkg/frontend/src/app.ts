/**
 * Application shell: owns the ViewState, keeps it in the URL hash, and
 * routes between the three views. Each view refreshes through its own
 * RequestGate so a stale response never clobbers a newer one.
 */

import { ApiClient, RequestGate } from './api.js';
import { clear, html } from './dom.js';
import { renderGraph } from './graph.js';
import {
  decodeState,
  encodeState,
  normalize,
  ViewState,
} from './state.js';
import { renderSummary } from './summary.js';
import { renderTimeline } from './timeline.js';
import type { HistogramBin, SummaryPayload } from './types.js';

export class App {
  state: ViewState;
  private gates = {
    timeline: new RequestGate(),
    graph: new RequestGate(),
    summary: new RequestGate(),
    repos: new RequestGate(),
  };

  constructor(
    private api: ApiClient,
    private root: Element,
    private window_: Window = window,
  ) {
    this.state = decodeState(this.window_.location.hash);
    this.window_.addEventListener('hashchange', () => {
      const next = decodeState(this.window_.location.hash);
      if (encodeState(next) !== encodeState(this.state)) {
        this.state = next;
        void this.render();
      }
    });
  }

  setState(patch: Partial<ViewState>): void {
    this.state = normalize({ ...this.state, ...patch });
    const hash = encodeState(this.state);
    if (this.window_.location.hash !== hash) {
      this.window_.location.hash = hash;
    }
    void this.render();
  }

  async render(): Promise<void> {
    clear(this.root);
    this.root.appendChild(this.renderNav());
    const body = html('div', { class: 'view-body' });
    this.root.appendChild(body);

    const repo = this.state.selected_repo;
    if (!repo) {
      await this.renderRepoPicker(body);
      return;
    }
    if (this.state.active_view === 'timeline') {
      await this.gates.timeline.run(
        () => this.api.timeline(repo.owner, repo.name, this.state.timeline_mode),
        (payload) =>
          renderTimeline(body, payload, {
            onSelectIssue: (issue) =>
              this.setState({ active_view: 'graph', selected_issue: issue }),
          }),
      );
    } else if (this.state.active_view === 'graph' && this.state.selected_issue !== null) {
      await this.gates.graph.run(
        () => this.api.graph(repo.owner, repo.name, this.state.selected_issue!),
        (payload) => renderGraph(body, payload),
      );
    } else {
      await this.gates.summary.run(
        async (): Promise<[SummaryPayload, HistogramBin[]]> =>
          Promise.all([
            this.api.summary(repo.owner, repo.name, this.state.summary_filters),
            this.api.histogram(repo.owner, repo.name, this.state.summary_filters.bug_only),
          ]),
        ([summary, bins]) =>
          renderSummary(body, summary, bins, this.state.summary_filters, {
            onFiltersChange: (filters) => this.setState({ summary_filters: filters }),
          }),
      );
    }
  }

  private async renderRepoPicker(body: Element): Promise<void> {
    await this.gates.repos.run(
      () => this.api.repos(),
      (repos) => {
        const list = html('div', { class: 'repo-picker' });
        list.appendChild(html('h2', {}, 'pick a repository snapshot'));
        for (const entry of repos) {
          const button = html(
            'button',
            { class: 'repo-button', 'data-repo': `${entry.owner}/${entry.name}` },
            `${entry.owner}/${entry.name} — ${entry.snapshot_time}`,
          );
          button.addEventListener('click', () =>
            this.setState({
              selected_repo: { owner: entry.owner, name: entry.name },
              active_view: 'timeline',
            }),
          );
          list.appendChild(button);
        }
        body.appendChild(list);
      },
    );
  }

  private renderNav(): Element {
    const nav = html('div', { class: 'nav' });
    const repo = this.state.selected_repo;
    nav.appendChild(
      html('span', { class: 'brand' }, repo ? `${repo.owner}/${repo.name}` : 'issuescope'),
    );
    if (repo) {
      for (const view of ['timeline', 'summary'] as const) {
        const button = html(
          'button',
          {
            class: this.state.active_view === view ? 'nav-button active' : 'nav-button',
            'data-view': view,
          },
          view === 'timeline' ? 'Timeline' : 'Updated files',
        );
        button.addEventListener('click', () =>
          this.setState({ active_view: view, selected_issue: null }),
        );
        nav.appendChild(button);
      }
      if (this.state.active_view === 'timeline') {
        const mode = html('select', { class: 'mode-select' });
        for (const value of ['status', 'labels']) {
          const option = html('option', { value }, value);
          if (value === this.state.timeline_mode) option.setAttribute('selected', '');
          mode.appendChild(option);
        }
        mode.addEventListener('change', () =>
          this.setState({ timeline_mode: mode.value as 'status' | 'labels' }),
        );
        nav.appendChild(mode);
      }
      const back = html('button', { class: 'nav-button' }, 'choose repo');
      back.addEventListener('click', () =>
        this.setState({ selected_repo: null, selected_issue: null, active_view: 'timeline' }),
      );
      nav.appendChild(back);
    }
    return nav;
  }
}
