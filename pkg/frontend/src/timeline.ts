/**
 * Timeline view: one horizontal bar per issue over a date axis.
 *
 * Bar width encodes how long the issue stayed open; open issues run to the
 * right edge and get an arrow glyph. In labels mode a multi-label issue is
 * drawn as alternating stripes of its label colors. Hover shows the
 * tooltip payload verbatim; clicking a bar navigates to that issue's
 * graph. All numbers come straight from the payload.
 */

import { clear, hideTooltip, showTooltip, svg } from './dom.js';
import type { TimelineBar, TimelinePayload } from './types.js';

export interface TimelineCallbacks {
  onSelectIssue(issueNumber: number): void;
}

const WIDTH = 960;
const LEFT = 70;
const RIGHT = 30;
const ROW = 24;
const BAR = 15;
const TOP = 34;
const STRIPE = 8;

export function renderTimeline(
  container: Element,
  payload: TimelinePayload,
  callbacks: TimelineCallbacks,
): void {
  clear(container);
  if (payload.bars.length === 0) {
    container.appendChild(emptyState('no issues in this snapshot'));
    return;
  }

  const times = payload.bars.flatMap((bar) => [Date.parse(bar.start), Date.parse(bar.end)]);
  const tMin = Math.min(...times);
  const tMax = Math.max(...times);
  const span = Math.max(tMax - tMin, 1);
  const plotWidth = WIDTH - LEFT - RIGHT;
  const x = (iso: string) => LEFT + ((Date.parse(iso) - tMin) / span) * plotWidth;

  const height = TOP + payload.bars.length * ROW + 28;
  const root = svg('svg', {
    viewBox: `0 0 ${WIDTH} ${height}`,
    width: String(WIDTH),
    class: 'timeline',
  });

  for (let tick = 0; tick <= 4; tick += 1) {
    const tx = LEFT + (plotWidth * tick) / 4;
    const when = new Date(tMin + (span * tick) / 4);
    root.appendChild(
      svg('line', {
        x1: String(tx), y1: String(TOP - 8), x2: String(tx), y2: String(height - 22),
        class: 'grid',
      }),
    );
    root.appendChild(
      svg('text', {
        x: String(tx), y: String(height - 6), 'text-anchor': 'middle', class: 'axis',
      }, when.toISOString().slice(0, 10)),
    );
  }

  payload.bars.forEach((bar, row) => {
    root.appendChild(renderBar(bar, row, x, callbacks));
  });
  container.appendChild(root);
  container.appendChild(renderLegend(payload));
}

function renderBar(
  bar: TimelineBar,
  row: number,
  x: (iso: string) => number,
  callbacks: TimelineCallbacks,
): SVGGElement {
  const y = TOP + row * ROW;
  const x0 = x(bar.start);
  const x1 = Math.max(x(bar.end), x0 + 2);
  const group = svg('g', {
    class: 'timeline-bar',
    'data-issue': String(bar.issue_number),
    'data-duration': String(bar.duration_days),
  });

  group.appendChild(
    svg('text', {
      x: String(LEFT - 6), y: String(y + BAR - 3), 'text-anchor': 'end', class: 'axis',
    }, `#${bar.issue_number}`),
  );

  if (bar.segments.length === 1) {
    group.appendChild(
      svg('rect', {
        x: String(x0), y: String(y), width: String(x1 - x0), height: String(BAR),
        fill: `#${bar.segments[0]!.color}`,
      }),
    );
  } else {
    const stripes = Math.max(Math.ceil((x1 - x0) / STRIPE), bar.segments.length);
    for (let s = 0; s < stripes; s += 1) {
      const sx0 = x0 + ((x1 - x0) * s) / stripes;
      const sx1 = x0 + ((x1 - x0) * (s + 1)) / stripes;
      group.appendChild(
        svg('rect', {
          x: String(sx0), y: String(y), width: String(sx1 - sx0), height: String(BAR),
          fill: `#${bar.segments[s % bar.segments.length]!.color}`,
          class: 'stripe',
        }),
      );
    }
  }

  if (bar.ongoing) {
    const mid = y + BAR / 2;
    group.appendChild(
      svg('polygon', {
        points: `${x1},${y} ${x1 + 9},${mid} ${x1},${y + BAR}`,
        fill: `#${bar.segments[bar.segments.length - 1]!.color}`,
        class: 'arrowhead',
      }),
    );
  }

  group.addEventListener('click', () => callbacks.onSelectIssue(bar.issue_number));
  group.addEventListener('mousemove', (event) => {
    const tip = bar.tooltip;
    showTooltip(
      [
        tip.title,
        `created: ${tip.created_at}`,
        `closed: ${tip.closed_at ?? 'still open'}`,
        `labels: ${tip.labels.length ? tip.labels.join(', ') : 'no label'}`,
      ],
      (event as MouseEvent).pageX,
      (event as MouseEvent).pageY,
    );
  });
  group.addEventListener('mouseleave', hideTooltip);
  return group;
}

function renderLegend(payload: TimelinePayload): HTMLElement {
  const box = document.createElement('div');
  box.className = 'legend';
  for (const entry of payload.legend) {
    const item = document.createElement('span');
    item.className = 'legend-item';
    const chip = document.createElement('span');
    chip.className = 'chip';
    chip.style.background = `#${entry.color}`;
    item.appendChild(chip);
    item.appendChild(document.createTextNode(entry.name));
    box.appendChild(item);
  }
  return box;
}

function emptyState(message: string): HTMLElement {
  const div = document.createElement('div');
  div.className = 'empty-state';
  div.textContent = message;
  return div;
}
