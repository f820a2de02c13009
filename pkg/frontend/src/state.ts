/** View state and actions.
 *
 * Everything here is derived from service responses plus layout: the store
 * never computes a verdict, margin, cost, or probability on its own. At most
 * one mutating request is in flight per graph; mutations queue behind each
 * other in call order.
 */

import { ApiError, Client } from "./api";
import { forceLayout, viewMode, type Point } from "./layout";
import { edgeDel, freshLabel, isolate, nodeCopy, nodeDel, nodeSplit } from "./steps";
import type {
  GraphJson,
  GraphPayload,
  ShockJson,
  StepJson,
  StressJson,
  SuggestionJson,
  VerdictJson,
} from "./types";

export interface Toast {
  code: string;
  message: string;
}

export interface StressOptions {
  tau: number;
  gamma: number;
  alpha: number;
  lambda: number;
  shock?: ShockJson;
  engine?: "epn" | "gillespie";
  asyncJob?: boolean;
}

export interface ViewState {
  graphId: string | null;
  graph: GraphJson | null;
  text: string;
  hash: string;
  history: StepJson[];
  positions: Map<number, Point>;
  mode: "canvas" | "table";
  preset: string | null;
  verdict: VerdictJson | null;
  cost: number | null;
  lastPrice: { step: StepJson; price: number } | null;
  selection: number[];
  stress: StressJson | null;
  stressVerdict: VerdictJson | null;
  suggestions: SuggestionJson[];
  suggestNote: string | null;
  settings: { seed: number; samples: number };
  busy: boolean;
  toasts: Toast[];
}

export const DEMOS: Record<string, string> = {
  "star-4": "directed\n0 1\n0 2\n0 3\n",
  "line-5": "undirected\n0 1\n1 2\n2 3\n3 4\n",
  "ring-5": "undirected\n0 1\n1 2\n2 3\n3 4\n4 0\n",
};

export const PRESETS = [
  "prop-6.1-out2",
  "prop-6.2-maxoutdeg",
  "prop-B-epi",
  "prop-B-spectral",
  "stress-sir",
];

function initialState(): ViewState {
  return {
    graphId: null,
    graph: null,
    text: "",
    hash: "",
    history: [],
    positions: new Map(),
    mode: "canvas",
    preset: null,
    verdict: null,
    cost: null,
    lastPrice: null,
    selection: [],
    stress: null,
    stressVerdict: null,
    suggestions: [],
    suggestNote: null,
    settings: { seed: 1, samples: 2000 },
    busy: false,
    toasts: [],
  };
}

export function degrees(graph: GraphJson): Map<number, { din: number; dout: number }> {
  const out = new Map<number, { din: number; dout: number }>();
  for (const v of graph.nodes) out.set(v, { din: 0, dout: 0 });
  for (const [v, w] of graph.edges) {
    out.get(v)!.dout += 1;
    out.get(w)!.din += 1;
  }
  return out;
}

export class Store {
  state: ViewState = initialState();

  private listeners = new Set<(s: ViewState) => void>();
  private chain: Promise<unknown> = Promise.resolve();

  constructor(readonly client: Client) {}

  subscribe(fn: (s: ViewState) => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private set(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Serialize mutating requests: the next one starts only after the
   * previous settled, whatever its outcome. */
  private mutate<T>(fn: () => Promise<T>): Promise<T> {
    const run = this.chain.then(fn, fn);
    this.chain = run.catch(() => undefined);
    return run;
  }

  /** Service errors become toasts, never exceptions into the UI loop. */
  private async guard<T>(work: () => Promise<T>): Promise<T | undefined> {
    try {
      return await work();
    } catch (err) {
      if (err instanceof ApiError) {
        this.pushToast(err.code, err.message);
        return undefined;
      }
      throw err;
    }
  }

  pushToast(code: string, message: string): void {
    this.set({ toasts: [...this.state.toasts, { code, message }] });
  }

  dismissToast(index: number): void {
    this.set({ toasts: this.state.toasts.filter((_, i) => i !== index) });
  }

  setSeed(seed: number): void {
    this.set({ settings: { ...this.state.settings, seed } });
  }

  setSamples(samples: number): void {
    this.set({ settings: { ...this.state.settings, samples } });
  }

  setSelection(nodes: number[]): void {
    this.set({ selection: [...new Set(nodes)].sort((a, b) => a - b) });
  }

  toggleSelect(v: number): void {
    const has = this.state.selection.includes(v);
    this.setSelection(
      has ? this.state.selection.filter((u) => u !== v) : [...this.state.selection, v],
    );
  }

  private gid(): string {
    if (this.state.graphId === null) throw new Error("no graph loaded");
    return this.state.graphId;
  }

  private adoptGraph(payload: GraphPayload): void {
    const mode = viewMode(payload.graph);
    this.set({
      graphId: payload.id,
      graph: payload.graph,
      text: payload.text,
      hash: payload.hash,
      history: payload.history,
      positions: mode === "canvas" ? forceLayout(payload.graph) : new Map(),
      mode,
      selection: [],
      stress: null,
      stressVerdict: null,
      suggestions: [],
      suggestNote: null,
    });
  }

  /** Re-pull verdict and running cost from the service. */
  private async refreshVerdict(): Promise<void> {
    const gid = this.gid();
    const { cost } = await this.client.cost(gid, { history: true });
    let verdict: VerdictJson | null = null;
    if (this.state.preset !== null) {
      try {
        verdict = await this.client.evaluate(gid, {
          preset: this.state.preset,
          seed: this.state.settings.seed,
          samples: this.state.preset === "stress-sir" ? this.state.settings.samples : undefined,
        });
      } catch (err) {
        if (!(err instanceof ApiError)) throw err;
        this.pushToast(err.code, err.message);
      }
    }
    this.set({ cost, verdict });
  }

  loadGraphText(text: string): Promise<void | undefined> {
    return this.guard(async () => {
      const payload = await this.client.createGraph(text);
      this.adoptGraph(payload);
      await this.refreshVerdict();
    });
  }

  loadDemo(name: keyof typeof DEMOS): Promise<void | undefined> {
    return this.loadGraphText(DEMOS[name]);
  }

  /** Open an existing service-side graph (page reload, workspace replay). */
  openGraph(gid: string): Promise<void | undefined> {
    return this.guard(async () => {
      const payload = await this.client.graph(gid);
      this.adoptGraph(payload);
      await this.refreshVerdict();
    });
  }

  selectPreset(name: string | null): Promise<void | undefined> {
    this.set({ preset: name, verdict: null });
    if (this.state.graphId === null) return Promise.resolve(undefined);
    return this.guard(() => this.refreshVerdict());
  }

  /** Apply one intervention: price it, apply it, re-pull verdict and cost. */
  applyStep(step: StepJson): Promise<void | undefined> {
    return this.mutate(() =>
      this.guard(async () => {
        const gid = this.gid();
        this.set({ busy: true });
        try {
          const { cost: price } = await this.client.cost(gid, { strategy: [step] });
          const payload = await this.client.apply(gid, step);
          this.adoptGraph(payload);
          this.set({ lastPrice: { step, price } });
          await this.refreshVerdict();
        } finally {
          this.set({ busy: false });
        }
      }),
    );
  }

  deleteEdge(v: number, w: number): Promise<void | undefined> {
    const directed = this.state.graph?.directed ?? true;
    return this.applyStep(directed ? edgeDel(v, w) : { kind: "uedge_del", v, w });
  }

  deleteNode(v: number): Promise<void | undefined> {
    return this.applyStep(nodeDel(v));
  }

  copyNode(v: number): Promise<void | undefined> {
    const nodes = this.state.graph?.nodes ?? [];
    return this.applyStep(nodeCopy(v, freshLabel(nodes)));
  }

  splitNode(v: number, rewired: [number, number][]): Promise<void | undefined> {
    const graph = this.state.graph;
    const nodes = graph?.nodes ?? [];
    const kind = (graph?.directed ?? true) ? "node_split" : "usplit";
    const step = nodeSplit(v, rewired, freshLabel(nodes));
    return this.applyStep({ ...step, kind } as StepJson);
  }

  isolateSelection(): Promise<void | undefined> {
    if (this.state.selection.length === 0) return Promise.resolve(undefined);
    const step = isolate(this.state.selection);
    this.set({ selection: [] });
    return this.applyStep(step);
  }

  undo(): Promise<void | undefined> {
    return this.mutate(() =>
      this.guard(async () => {
        const gid = this.gid();
        this.set({ busy: true });
        try {
          const payload = await this.client.undo(gid);
          this.adoptGraph(payload);
          this.set({ lastPrice: null });
          await this.refreshVerdict();
        } finally {
          this.set({ busy: false });
        }
      }),
    );
  }

  suggest(): Promise<void | undefined> {
    return this.guard(async () => {
      if (this.state.preset === null) {
        this.pushToast("no_preset", "pick an acceptance preset first");
        return;
      }
      const report = await this.client.suggest(this.gid(), {
        preset: this.state.preset,
        seed: this.state.settings.seed,
      });
      this.set({ suggestions: report.suggestions, suggestNote: report.note || null });
    });
  }

  /** Apply a suggested strategy in one queue slot, steps in order. */
  applySuggestion(index: number): Promise<void | undefined> {
    const suggestion = this.state.suggestions[index];
    if (!suggestion) return Promise.resolve(undefined);
    return this.mutate(() =>
      this.guard(async () => {
        const gid = this.gid();
        this.set({ busy: true });
        try {
          let payload: GraphPayload | null = null;
          for (const step of suggestion.strategy) {
            payload = await this.client.apply(gid, step);
          }
          if (payload) this.adoptGraph(payload);
          this.set({ suggestions: [], suggestNote: null });
          await this.refreshVerdict();
        } finally {
          this.set({ busy: false });
        }
      }),
    );
  }

  /** Run a stress test; the badge verdict comes from the service's own
   * three-valued evaluation, never from comparing numbers client-side. */
  runStress(opts: StressOptions): Promise<void | undefined> {
    return this.guard(async () => {
      const gid = this.gid();
      const config = {
        tau: opts.tau,
        gamma: opts.gamma,
        alpha: opts.alpha,
        lambda: opts.lambda,
        shock: opts.shock ?? { kind: "uniform_single_node" },
        samples: this.state.settings.samples,
        seed: this.state.settings.seed,
      };
      const body = { config, engine: opts.engine ?? "epn" };
      const stress = opts.asyncJob
        ? await this.client.pollJob((await this.client.stressAsync(gid, body)).job)
        : await this.client.stress(gid, body);
      const stressVerdict = await this.client.evaluate(gid, {
        acceptance: {
          q: { kind: "stress_probability", config },
          schedule: { kind: "constant", value: config.lambda },
        },
        seed: config.seed,
      });
      this.set({ stress, stressVerdict });
    });
  }
}
