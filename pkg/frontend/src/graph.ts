/**
 * Issue graph view: a node-link diagram seeded with the server's layout.
 *
 * Nodes are draggable; dragging pins the node to the pointer, reheats the
 * local simulation (same force rules as the server layout), and the rest
 * of the graph resettles live. Bug-fix edges render red; hovering a node
 * shows its full display text (user login, file path, commit message, or
 * issue title); a legend explains node kinds.
 */

import { clear, hideTooltip, showTooltip, svg } from './dom.js';
import { Simulation } from './physics.js';
import type { GraphPayload } from './types.js';

const WIDTH = 960;
const HEIGHT = 620;
const KIND_RADIUS: Record<string, number> = { issue: 16, user: 9, commit: 9, file: 7 };

export interface GraphHandle {
  simulation: Simulation;
  /** advance and repaint one frame; exposed so tests can step synchronously */
  step(): void;
}

export function renderGraph(container: Element, payload: GraphPayload): GraphHandle {
  clear(container);
  if (payload.nodes.length <= 1) {
    const div = document.createElement('div');
    div.className = 'empty-state';
    div.textContent = 'nothing linked to this issue yet';
    container.appendChild(div);
  }

  const root = svg('svg', {
    viewBox: `${-WIDTH / 2} ${-HEIGHT / 2} ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    class: 'graph',
  });
  container.appendChild(root);

  const simulation = new Simulation(payload.nodes, payload.edges);
  const nodeIndex = new Map(payload.nodes.map((n, i) => [n.id, i]));

  const edgeLines = payload.edges.map((edge) => {
    const line = svg('line', {
      class: edge.bug_fix ? 'edge edge-bugfix' : 'edge',
      stroke: edge.bug_fix ? '#d73a4a' : '#bbbbbb',
      'stroke-width': edge.bug_fix ? '2.5' : '1.5',
      'data-kind': edge.kind,
    });
    root.appendChild(line);
    return { line, s: nodeIndex.get(edge.source)!, t: nodeIndex.get(edge.target)! };
  });

  const circles = payload.nodes.map((node, i) => {
    const circle = svg('circle', {
      class: `node node-${node.kind}`,
      r: String(KIND_RADIUS[node.kind] ?? 8),
      fill: `#${node.color}`,
      'data-id': node.id,
    });
    circle.addEventListener('mousemove', (event) => {
      const roles = node.roles.length ? ` (${node.roles.join(', ')})` : '';
      showTooltip(
        [`${node.kind}${roles}`, node.display],
        (event as MouseEvent).pageX,
        (event as MouseEvent).pageY,
      );
    });
    circle.addEventListener('mouseleave', hideTooltip);
    attachDrag(circle, i);
    root.appendChild(circle);
    return circle;
  });

  for (const [row, entry] of legendEntries(payload).entries()) {
    root.appendChild(
      svg('circle', {
        cx: String(-WIDTH / 2 + 18), cy: String(-HEIGHT / 2 + 20 + row * 20), r: '6',
        fill: `#${entry.color}`,
      }),
    );
    root.appendChild(
      svg('text', {
        x: String(-WIDTH / 2 + 30), y: String(-HEIGHT / 2 + 24 + row * 20), class: 'axis',
      }, entry.kind),
    );
  }

  function paint(): void {
    simulation.nodes.forEach((node, i) => {
      circles[i]!.setAttribute('cx', String(node.x));
      circles[i]!.setAttribute('cy', String(node.y));
    });
    for (const { line, s, t } of edgeLines) {
      line.setAttribute('x1', String(simulation.nodes[s]!.x));
      line.setAttribute('y1', String(simulation.nodes[s]!.y));
      line.setAttribute('x2', String(simulation.nodes[t]!.x));
      line.setAttribute('y2', String(simulation.nodes[t]!.y));
    }
  }

  function step(): void {
    simulation.tick();
    paint();
  }

  let frame: number | null = null;
  function animate(): void {
    if (frame !== null) return;
    const loop = () => {
      step();
      frame = simulation.settled ? null : requestAnimationFrame(loop);
    };
    frame = requestAnimationFrame(loop);
  }

  function attachDrag(circle: SVGCircleElement, index: number): void {
    circle.addEventListener('pointerdown', (down) => {
      down.preventDefault();
      const node = simulation.nodes[index]!;
      const toLocal = (event: PointerEvent): [number, number] => {
        const rect = root.getBoundingClientRect();
        const scale = rect.width > 0 ? WIDTH / rect.width : 1;
        return [
          (event.clientX - rect.left) * scale - WIDTH / 2,
          (event.clientY - rect.top) * scale - HEIGHT / 2,
        ];
      };
      const move = (event: PointerEvent) => {
        [node.fx, node.fy] = toLocal(event);
        simulation.reheat();
        animate();
      };
      const up = () => {
        node.fx = null;
        node.fy = null;
        simulation.reheat();
        animate();
        window.removeEventListener('pointermove', move);
        window.removeEventListener('pointerup', up);
      };
      window.addEventListener('pointermove', move);
      window.addEventListener('pointerup', up);
    });
  }

  paint();
  return { simulation, step };
}

function legendEntries(payload: GraphPayload): { kind: string; color: string }[] {
  const seen = new Map<string, string>();
  for (const node of payload.nodes) {
    if (!seen.has(node.kind)) seen.set(node.kind, node.color);
  }
  return [...seen.entries()].map(([kind, color]) => ({ kind, color }));
}
