/**
 * Updated-files summary: a donut of the top files linked to a histogram.
 *
 * Hovering a wedge puts that file's line count in the donut center;
 * clicking a histogram bar narrows the donut to files from that bin
 * (the callback receives the bin's exact L-U token to send back to the
 * API); checkboxes toggle the bug-fix-only view and per-file exclusion.
 * The view draws only numbers the API returned.
 */

import { clear, hideTooltip, showTooltip, svg } from './dom.js';
import type { SummaryFilters } from './state.js';
import type { HistogramBin, SummaryPayload } from './types.js';

export interface SummaryCallbacks {
  onFiltersChange(filters: SummaryFilters): void;
}

const SIZE = 320;
const R_OUTER = 130;
const R_INNER = 78;

export function renderSummary(
  container: Element,
  payload: SummaryPayload,
  bins: HistogramBin[],
  filters: SummaryFilters,
  callbacks: SummaryCallbacks,
): void {
  clear(container);
  const panel = document.createElement('div');
  panel.className = 'summary-panel';
  panel.appendChild(renderDonut(payload));
  panel.appendChild(renderHistogram(bins, filters, callbacks));
  panel.appendChild(renderFilters(payload, filters, callbacks));
  container.appendChild(panel);
}

function point(r: number, angle: number): [number, number] {
  // angle 0 = 12 o'clock, clockwise positive (matches the API's geometry)
  return [r * Math.sin(angle), -r * Math.cos(angle)];
}

function wedgePath(a0: number, a1: number): string {
  const mid = (a0 + a1) / 2;
  const [ox0, oy0] = point(R_OUTER, a0);
  const [oxm, oym] = point(R_OUTER, mid);
  const [ox1, oy1] = point(R_OUTER, a1);
  const [ix1, iy1] = point(R_INNER, a1);
  const [ixm, iym] = point(R_INNER, mid);
  const [ix0, iy0] = point(R_INNER, a0);
  return [
    `M ${ox0} ${oy0}`,
    `A ${R_OUTER} ${R_OUTER} 0 0 1 ${oxm} ${oym}`,
    `A ${R_OUTER} ${R_OUTER} 0 0 1 ${ox1} ${oy1}`,
    `L ${ix1} ${iy1}`,
    `A ${R_INNER} ${R_INNER} 0 0 0 ${ixm} ${iym}`,
    `A ${R_INNER} ${R_INNER} 0 0 0 ${ix0} ${iy0}`,
    'Z',
  ].join(' ');
}

function renderDonut(payload: SummaryPayload): HTMLElement {
  const box = document.createElement('div');
  box.className = 'donut-box';
  if (payload.total === 0) {
    const div = document.createElement('div');
    div.className = 'empty-state';
    div.textContent = 'no updated lines match the filters';
    box.appendChild(div);
    return box;
  }
  const root = svg('svg', {
    viewBox: `${-SIZE / 2} ${-SIZE / 2} ${SIZE} ${SIZE}`,
    width: String(SIZE),
    class: 'donut',
  });
  const center = svg('text', {
    x: '0', y: '6', 'text-anchor': 'middle', class: 'donut-center',
  }, String(payload.total));

  const fullTurn = 2 * Math.PI - 1e-9;
  for (const wedge of payload.wedges) {
    const a1 = Math.min(wedge.end_angle, wedge.start_angle + fullTurn);
    const path = svg('path', {
      d: wedgePath(wedge.start_angle, a1),
      fill: `#${wedge.color}`,
      class: 'wedge',
      'data-name': wedge.name,
      'data-value': String(wedge.value),
    });
    path.addEventListener('mousemove', (event) => {
      center.textContent = String(wedge.value);
      showTooltip([wedge.name], (event as MouseEvent).pageX, (event as MouseEvent).pageY);
    });
    path.addEventListener('mouseleave', () => {
      center.textContent = String(payload.total);
      hideTooltip();
    });
    root.appendChild(path);
  }
  root.appendChild(center);
  box.appendChild(root);
  return box;
}

function renderHistogram(
  bins: HistogramBin[],
  filters: SummaryFilters,
  callbacks: SummaryCallbacks,
): HTMLElement {
  const box = document.createElement('div');
  box.className = 'hist-box';
  const maxCount = Math.max(...bins.map((b) => b.file_count), 1);
  for (const bin of bins) {
    const row = document.createElement('div');
    row.className = 'hist-row' + (filters.bin === bin.token ? ' hist-selected' : '');
    row.setAttribute('data-token', bin.token);
    const label = document.createElement('span');
    label.className = 'hist-label';
    label.textContent = bin.token;
    const bar = document.createElement('span');
    bar.className = 'hist-bar';
    bar.style.width = `${(160 * bin.file_count) / maxCount}px`;
    const count = document.createElement('span');
    count.className = 'hist-count';
    count.textContent = String(bin.file_count);
    row.append(label, bar, count);
    row.addEventListener('click', () => {
      const next = filters.bin === bin.token ? null : bin.token;
      callbacks.onFiltersChange({ ...filters, bin: next });
    });
    box.appendChild(row);
  }
  return box;
}

function renderFilters(
  payload: SummaryPayload,
  filters: SummaryFilters,
  callbacks: SummaryCallbacks,
): HTMLElement {
  const box = document.createElement('div');
  box.className = 'filter-box';

  const bugRow = document.createElement('label');
  const bug = document.createElement('input');
  bug.type = 'checkbox';
  bug.checked = filters.bug_only;
  bug.className = 'bug-only-toggle';
  bug.addEventListener('change', () => {
    callbacks.onFiltersChange({ ...filters, bug_only: bug.checked });
  });
  bugRow.append(bug, document.createTextNode(' bug-fix commits only'));
  box.appendChild(bugRow);

  const named = payload.wedges.filter((w) => w.name !== 'OTHERS');
  for (const wedge of named) {
    const row = document.createElement('label');
    row.className = 'exclude-row';
    const toggle = document.createElement('input');
    toggle.type = 'checkbox';
    toggle.checked = true;
    toggle.setAttribute('data-path', wedge.name);
    toggle.addEventListener('change', () => {
      const excluded = toggle.checked
        ? filters.excluded.filter((p) => p !== wedge.name)
        : [...filters.excluded, wedge.name];
      callbacks.onFiltersChange({ ...filters, excluded });
    });
    row.append(toggle, document.createTextNode(` ${wedge.name}`));
    box.appendChild(row);
  }
  for (const path of filters.excluded) {
    const row = document.createElement('label');
    row.className = 'exclude-row excluded';
    const toggle = document.createElement('input');
    toggle.type = 'checkbox';
    toggle.checked = false;
    toggle.setAttribute('data-path', path);
    toggle.addEventListener('change', () => {
      callbacks.onFiltersChange({
        ...filters,
        excluded: filters.excluded.filter((p) => p !== path),
      });
    });
    row.append(toggle, document.createTextNode(` ${path}`));
    box.appendChild(row);
  }
  return box;
}
