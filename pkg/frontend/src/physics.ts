/**
 * Client-side force simulation for interactive node dragging.
 *
 * Mirrors the server layout's force rules (link springs toward a target
 * length with degree-based strength and bias, pairwise repulsion with the
 * sub-unit softening clamp, weak centering, geometric alpha decay,
 * velocity damping) so a drag resettles the graph the same way the server
 * laid it out. Server positions seed the simulation, which starts cold
 * (alpha 0) and is only heated by interaction.
 */

export interface SimNode {
  id: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
  fx: number | null; // pin (drag) position
  fy: number | null;
}

export interface SimLink {
  source: number;
  target: number;
  strength: number;
  bias: number;
}

export interface SimParams {
  linkDistance: number;
  repulsion: number;
  centering: number;
  velocityDecay: number;
  alphaDecay: number;
  alphaMin: number;
}

export const DEFAULT_PARAMS: SimParams = {
  linkDistance: 60,
  repulsion: -30,
  centering: 0.1,
  velocityDecay: 0.6,
  alphaDecay: 0.0228,
  alphaMin: 0.001,
};

export class Simulation {
  alpha = 0;
  readonly nodes: SimNode[];
  readonly links: SimLink[];

  constructor(
    nodes: { id: string; x: number; y: number }[],
    edges: { source: string; target: string }[],
    private params: SimParams = DEFAULT_PARAMS,
  ) {
    this.nodes = nodes.map((n) => ({ id: n.id, x: n.x, y: n.y, vx: 0, vy: 0, fx: null, fy: null }));
    const index = new Map(this.nodes.map((n, i) => [n.id, i]));
    const degree = new Array<number>(this.nodes.length).fill(0);
    const pairs: [number, number][] = [];
    for (const edge of edges) {
      const s = index.get(edge.source);
      const t = index.get(edge.target);
      if (s === undefined || t === undefined) continue;
      degree[s] = degree[s]! + 1;
      degree[t] = degree[t]! + 1;
      pairs.push([s, t]);
    }
    this.links = pairs.map(([s, t]) => ({
      source: s,
      target: t,
      strength: 1 / Math.max(Math.min(degree[s]!, degree[t]!), 1),
      bias: degree[s]! / Math.max(degree[s]! + degree[t]!, 1),
    }));
  }

  /** Heat the simulation after an interaction. */
  reheat(alpha = 0.3): void {
    this.alpha = Math.max(this.alpha, alpha);
  }

  get settled(): boolean {
    return this.alpha < this.params.alphaMin;
  }

  tick(): void {
    if (this.settled) return;
    const { linkDistance, repulsion, centering, velocityDecay, alphaDecay } = this.params;
    this.alpha += (0 - this.alpha) * alphaDecay;
    const alpha = this.alpha;
    const nodes = this.nodes;

    for (const link of this.links) {
      const s = nodes[link.source]!;
      const t = nodes[link.target]!;
      let dx = t.x + t.vx - s.x - s.vx;
      let dy = t.y + t.vy - s.y - s.vy;
      if (dx === 0 && dy === 0) dx = 1e-6;
      const dist = Math.hypot(dx, dy);
      const scale = ((dist - linkDistance) / dist) * alpha * link.strength;
      dx *= scale;
      dy *= scale;
      t.vx -= dx * link.bias;
      t.vy -= dy * link.bias;
      s.vx += dx * (1 - link.bias);
      s.vy += dy * (1 - link.bias);
    }

    for (let i = 0; i < nodes.length; i += 1) {
      const a = nodes[i]!;
      for (let j = i + 1; j < nodes.length; j += 1) {
        const b = nodes[j]!;
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let distSq = dx * dx + dy * dy;
        if (distSq < 1e-12) {
          dx = 1e-6;
          dy = 1e-6;
          distSq = 2e-12;
        }
        const soft = distSq < 1 ? Math.sqrt(distSq) : distSq;
        const w = (repulsion * alpha) / soft;
        a.vx += dx * w;
        a.vy += dy * w;
        b.vx -= dx * w;
        b.vy -= dy * w;
      }
    }

    for (const node of nodes) {
      node.vx += (0 - node.x) * centering * alpha;
      node.vy += (0 - node.y) * centering * alpha;
      node.vx *= velocityDecay;
      node.vy *= velocityDecay;
      if (node.fx !== null && node.fy !== null) {
        node.x = node.fx;
        node.y = node.fy;
        node.vx = 0;
        node.vy = 0;
      } else {
        node.x += node.vx;
        node.y += node.vy;
      }
    }
  }
}
