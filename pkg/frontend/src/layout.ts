// Force-directed layout: spring-electrical model plus a per-cluster
// centroid attraction whose strength is linear in the tightness knob.
// Everything is deterministic: initial positions come from a seeded
// generator and the step loop uses no randomness at all.

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutEdge {
  source: string;
  target: string;
}

export interface LayoutOptions {
  width: number;
  height: number;
  seed: number;
  /** Intra-cluster attraction scale, 0..1. Zero means clusters exert no force. */
  tightness: number;
  /** Cluster label per node id; nodes without a label feel no cluster pull. */
  clusterOf?: (id: string) => number | undefined;
  repulsion?: number;
  spring?: number;
  restLength?: number;
  gravity?: number;
  clusterPull?: number;
  damping?: number;
}

/** Small fast seeded PRNG; same seed, same sequence, on every platform. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Deterministic starting coordinates: ids are visited in sorted order. */
export function initialPositions(
  ids: string[],
  width: number,
  height: number,
  seed: number,
): Map<string, { x: number; y: number }> {
  const rng = mulberry32(seed);
  const out = new Map<string, { x: number; y: number }>();
  for (const id of [...ids].sort()) {
    out.set(id, {
      x: width * (0.15 + 0.7 * rng()),
      y: height * (0.15 + 0.7 * rng()),
    });
  }
  return out;
}

export class ForceLayout {
  readonly nodes: LayoutNode[];
  private readonly index = new Map<string, number>();
  private readonly edges: Array<[number, number]>;
  private readonly opts: Required<Omit<LayoutOptions, "clusterOf">>;
  private readonly clusterOf: ((id: string) => number | undefined) | undefined;

  constructor(ids: string[], edges: LayoutEdge[], options: LayoutOptions) {
    this.opts = {
      width: options.width,
      height: options.height,
      seed: options.seed,
      tightness: options.tightness,
      repulsion: options.repulsion ?? 6000,
      spring: options.spring ?? 0.02,
      restLength: options.restLength ?? 120,
      gravity: options.gravity ?? 0.015,
      clusterPull: options.clusterPull ?? 0.06,
      damping: options.damping ?? 0.85,
    };
    this.clusterOf = options.clusterOf;
    const start = initialPositions(ids, options.width, options.height, options.seed);
    this.nodes = [...ids].sort().map((id) => {
      const p = start.get(id)!;
      return { id, x: p.x, y: p.y, vx: 0, vy: 0 };
    });
    this.nodes.forEach((n, i) => this.index.set(n.id, i));
    this.edges = [];
    for (const e of edges) {
      const a = this.index.get(e.source);
      const b = this.index.get(e.target);
      if (a !== undefined && b !== undefined && a !== b) this.edges.push([a, b]);
    }
  }

  step(): void {
    const { repulsion, spring, restLength, gravity, clusterPull, damping } = this.opts;
    const n = this.nodes.length;
    const ax = new Float64Array(n);
    const ay = new Float64Array(n);

    // Pairwise repulsion, inverse-square with a floor to avoid blowups.
    for (let i = 0; i < n; i++) {
      const a = this.nodes[i];
      for (let j = i + 1; j < n; j++) {
        const b = this.nodes[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-4) {
          // Coincident points push apart along a fixed axis so the result
          // stays deterministic.
          dx = 0.01;
          dy = 0.01;
          d2 = 2e-4;
        }
        const inv = repulsion / d2;
        const d = Math.sqrt(d2);
        const fx = (dx / d) * inv;
        const fy = (dy / d) * inv;
        ax[i] += fx;
        ay[i] += fy;
        ax[j] -= fx;
        ay[j] -= fy;
      }
    }

    // Springs along edges.
    for (const [i, j] of this.edges) {
      const a = this.nodes[i];
      const b = this.nodes[j];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.sqrt(dx * dx + dy * dy) || 1e-2;
      const f = spring * (d - restLength);
      const fx = (dx / d) * f;
      const fy = (dy / d) * f;
      ax[i] += fx;
      ay[i] += fy;
      ax[j] -= fx;
      ay[j] -= fy;
    }

    // Gentle pull toward the canvas center.
    const cx = this.opts.width / 2;
    const cy = this.opts.height / 2;
    for (let i = 0; i < n; i++) {
      const a = this.nodes[i];
      ax[i] += (cx - a.x) * gravity;
      ay[i] += (cy - a.y) * gravity;
    }

    // Per-cluster centroid attraction, scaled by tightness. A tightness of
    // exactly zero contributes exactly zero force, so the trajectory is
    // identical to running with no clusters at all.
    if (this.clusterOf) {
      const sums = new Map<number, { x: number; y: number; count: number }>();
      for (const node of this.nodes) {
        const label = this.clusterOf(node.id);
        if (label === undefined) continue;
        const s = sums.get(label) ?? { x: 0, y: 0, count: 0 };
        s.x += node.x;
        s.y += node.y;
        s.count += 1;
        sums.set(label, s);
      }
      const k = clusterPull * this.opts.tightness;
      for (let i = 0; i < n; i++) {
        const node = this.nodes[i];
        const label = this.clusterOf(node.id);
        if (label === undefined) continue;
        const s = sums.get(label)!;
        ax[i] += k * (s.x / s.count - node.x);
        ay[i] += k * (s.y / s.count - node.y);
      }
    }

    for (let i = 0; i < n; i++) {
      const node = this.nodes[i];
      node.vx = (node.vx + ax[i]) * damping;
      node.vy = (node.vy + ay[i]) * damping;
      node.x += node.vx;
      node.y += node.vy;
    }
  }

  run(ticks: number): void {
    for (let t = 0; t < ticks; t++) this.step();
  }

  positions(): Map<string, { x: number; y: number }> {
    const out = new Map<string, { x: number; y: number }>();
    for (const node of this.nodes) out.set(node.id, { x: node.x, y: node.y });
    return out;
  }
}
