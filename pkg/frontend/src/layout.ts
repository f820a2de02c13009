/** Deterministic force-directed layout.
 *
 * No randomness: nodes start on a circle in label order and the same input
 * always yields the same positions, so re-rendering after a workspace replay
 * draws the same picture.
 */

import type { GraphJson } from "./types";

export interface Point {
  x: number;
  y: number;
}

/** Above this the canvas stops being readable; the view falls back to a table. */
export const NODE_CAP = 500;

export const WIDTH = 720;
export const HEIGHT = 480;

export function viewMode(graph: GraphJson): "canvas" | "table" {
  return graph.nodes.length > NODE_CAP ? "table" : "canvas";
}

export function forceLayout(graph: GraphJson, iterations = 120): Map<number, Point> {
  const nodes = [...graph.nodes].sort((a, b) => a - b);
  const n = nodes.length;
  const pos = new Map<number, Point>();
  if (n === 0) return pos;

  const radius = Math.min(WIDTH, HEIGHT) * 0.38;
  nodes.forEach((v, i) => {
    const angle = (2 * Math.PI * i) / n;
    pos.set(v, {
      x: WIDTH / 2 + radius * Math.cos(angle),
      y: HEIGHT / 2 + radius * Math.sin(angle),
    });
  });
  if (n === 1) return pos;

  // undirected neighbor pairs, deduplicated
  const springs = new Set<string>();
  const pairs: [number, number][] = [];
  for (const [v, w] of graph.edges) {
    const key = v < w ? `${v},${w}` : `${w},${v}`;
    if (!springs.has(key)) {
      springs.add(key);
      pairs.push(v < w ? [v, w] : [w, v]);
    }
  }
  pairs.sort((a, b) => a[0] - b[0] || a[1] - b[1]);

  const ideal = radius / Math.sqrt(n);
  const disp = new Map<number, Point>();
  for (let step = 0; step < iterations; step++) {
    const heat = radius * 0.1 * (1 - step / iterations) + 1;
    for (const v of nodes) disp.set(v, { x: 0, y: 0 });

    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const a = pos.get(nodes[i])!;
        const b = pos.get(nodes[j])!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let d2 = dx * dx + dy * dy;
        if (d2 === 0) {
          // identical positions: separate along a direction fixed by index
          dx = 0.01 * (i + 1);
          dy = 0.01 * (j + 1);
          d2 = dx * dx + dy * dy;
        }
        const push = (ideal * ideal) / d2;
        const da = disp.get(nodes[i])!;
        const db = disp.get(nodes[j])!;
        da.x += dx * push;
        da.y += dy * push;
        db.x -= dx * push;
        db.y -= dy * push;
      }
    }

    for (const [v, w] of pairs) {
      const a = pos.get(v)!;
      const b = pos.get(w)!;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const d = Math.sqrt(dx * dx + dy * dy) || 1e-6;
      const pull = (d * d) / ideal / d / 30;
      const da = disp.get(v)!;
      const db = disp.get(w)!;
      da.x -= dx * pull;
      da.y -= dy * pull;
      db.x += dx * pull;
      db.y += dy * pull;
    }

    for (const v of nodes) {
      const p = pos.get(v)!;
      const d = disp.get(v)!;
      const len = Math.sqrt(d.x * d.x + d.y * d.y) || 1e-6;
      const cap = Math.min(len, heat);
      p.x += (d.x / len) * cap;
      p.y += (d.y / len) * cap;
      p.x = Math.min(WIDTH - 20, Math.max(20, p.x));
      p.y = Math.min(HEIGHT - 20, Math.max(20, p.y));
    }
  }
  return pos;
}

/** Node radius scaled by total degree; presentation only. */
export function nodeRadius(degree: number): number {
  return 6 + 2 * Math.sqrt(degree);
}
