/** Intervention builders and their display strings.
 *
 * The JSON built here is the wire format the service parses; describe() is
 * the one rendering used everywhere (history timeline, suggestion rows), so
 * a step echoed back by the service renders identically to the one sent.
 */

import type { StepJson } from "./types";

function sortedPairs(edges: Iterable<[number, number]>): [number, number][] {
  return [...edges].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

export function edgeDel(v: number, w: number): StepJson {
  return { kind: "edge_del", v, w };
}

export function edgeAdd(v: number, w: number): StepJson {
  return { kind: "edge_add", v, w };
}

export function nodeDel(v: number): StepJson {
  return { kind: "node_del", v };
}

export function nodeCopy(v: number, fresh: number): StepJson {
  return { kind: "node_copy", v, new: fresh };
}

export function isolate(nodes: Iterable<number>): StepJson {
  return { kind: "isolate", within: [...new Set(nodes)].sort((a, b) => a - b) };
}

export function nodeSplit(v: number, rewired: [number, number][], fresh: number): StepJson {
  return { kind: "node_split", v, new: fresh, edges: sortedPairs(rewired) };
}

export function describe(step: StepJson): string {
  switch (step.kind) {
    case "identity":
      return "identity";
    case "edge_del":
    case "edge_add":
    case "uedge_del":
    case "uedge_add":
      return `${step.kind} ${step.v} ${step.w}`;
    case "node_del":
    case "node_add":
      return `${step.kind} ${step.v}`;
    case "isolate":
      return `isolate {${[...step.within].sort((a, b) => a - b).join(",")}}`;
    case "edge_shift":
      return `edge_shift (${step.src[0]},${step.src[1]}) (${step.dst[0]},${step.dst[1]})`;
    case "node_split":
    case "usplit": {
      const edges = sortedPairs(step.edges).map(([v, w]) => `(${v},${w})`).join(",");
      return `${step.kind} v=${step.v} new=${step.new} edges=[${edges}]`;
    }
    case "node_merge":
      return `node_merge ${step.v} ${step.merged}`;
    case "node_copy":
      return `node_copy v=${step.v} new=${step.new}`;
    case "uedge_shift":
      return `uedge_shift {${[...step.src].sort((a, b) => a - b).join(",")}} {${[...step.dst].sort((a, b) => a - b).join(",")}}`;
    case "kelmans":
      return `kelmans ${step.v} ${step.u}`;
  }
}

export function describeStrategy(steps: StepJson[]): string {
  return steps.map(describe).join("; ");
}

/** Smallest label not taken by the graph, for split/copy targets. */
export function freshLabel(nodes: number[]): number {
  const taken = new Set(nodes);
  let k = 0;
  while (taken.has(k)) k += 1;
  return k;
}
