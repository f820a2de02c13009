/** JSON shapes of the supervision service. The UI never computes these
 * values itself; it only carries them from responses to the screen. */

export type StepJson =
  | { kind: "identity" }
  | { kind: "edge_del" | "edge_add" | "uedge_del" | "uedge_add"; v: number; w: number }
  | { kind: "node_del" | "node_add"; v: number }
  | { kind: "isolate"; within: number[] }
  | { kind: "edge_shift"; src: [number, number]; dst: [number, number] }
  | { kind: "node_split" | "usplit"; v: number; new: number; edges: [number, number][] }
  | { kind: "node_merge"; v: number; merged: number }
  | { kind: "node_copy"; v: number; new: number }
  | { kind: "uedge_shift"; src: number[]; dst: number[] }
  | { kind: "kelmans"; v: number; u: number };

export interface GraphJson {
  directed: boolean;
  nodes: number[];
  edges: [number, number][];
}

export interface GraphPayload {
  id: string;
  graph: GraphJson;
  text: string;
  hash: string;
  history: StepJson[];
  nodes: number;
  edges: number;
  effective?: boolean;
  applied?: StepJson;
  undone?: StepJson;
}

export interface EstimateJson {
  p_hat: number;
  ci_low: number;
  ci_high: number;
  samples: number;
  seed: number;
}

/** accepted is three-valued: null means the CI straddles the threshold. */
export interface VerdictJson {
  accepted: boolean | null;
  q: number;
  q_exact: number | string | null;
  threshold: number;
  threshold_exact: number | string | null;
  margin: number;
  estimate?: EstimateJson;
}

export interface StressJson {
  estimate: EstimateJson;
  final_sizes: [number, number][];
  engine: string;
  cached?: boolean;
}

export interface JobJson {
  status: "pending" | "done" | "error";
  result?: StressJson;
  message?: string;
}

export interface SuggestionJson {
  strategy: StepJson[];
  cost: number;
  margin: number;
  accepted: boolean;
}

export interface SuggestJson {
  suggestions: SuggestionJson[];
  note: string;
}

export interface MetricJson {
  value: number;
  exact: number | string;
}

export interface MetricsJson {
  id: string;
  metrics: Record<string, MetricJson>;
}

export interface ShockJson {
  kind: "uniform_single_node" | "fixed_set" | "per_node_bernoulli";
  nodes?: number[];
  p?: number;
}

export interface StressConfigJson {
  tau: number;
  gamma: number;
  alpha: number;
  lambda: number;
  shock: ShockJson;
  samples: number;
  seed: number;
}

export interface ErrorJson {
  code: string;
  message: string;
}
