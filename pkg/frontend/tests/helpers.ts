/** Canned payloads and a scriptable stand-in for the service client.
 *
 * Every numeric field is a sentinel no client-side formula would produce,
 * so a test that sees the value on screen knows it came from the response.
 */

import type { Client } from "../src/api";
import type {
  GraphPayload,
  StepJson,
  StressJson,
  SuggestJson,
  VerdictJson,
} from "../src/types";

export function star4(over: Partial<GraphPayload> = {}): GraphPayload {
  return {
    id: "g1",
    graph: { directed: true, nodes: [0, 1, 2, 3], edges: [[0, 1], [0, 2], [0, 3]] },
    text: "directed\n0 1\n0 2\n0 3\n",
    hash: "hash-star4",
    history: [],
    nodes: 4,
    edges: 3,
    ...over,
  };
}

export function verdict(accepted: boolean | null, over: Partial<VerdictJson> = {}): VerdictJson {
  return {
    accepted,
    q: 42.125,
    q_exact: "337/8",
    threshold: 1.375,
    threshold_exact: "11/8",
    margin: -40.75,
    ...over,
  };
}

export const STRESS: StressJson = {
  estimate: { p_hat: 0.123, ci_low: 0.101, ci_high: 0.149, samples: 2000, seed: 1 },
  final_sizes: [[1, 1500], [2, 300], [4, 200]],
  engine: "epn",
};

export const SUGGESTIONS: SuggestJson = {
  suggestions: [
    {
      strategy: [
        { kind: "edge_del", v: 0, w: 1 },
        { kind: "edge_del", v: 0, w: 2 },
      ],
      cost: 2.5,
      margin: 0.125,
      accepted: true,
    },
    {
      strategy: [{ kind: "isolate", within: [0, 1] }],
      cost: 9.75,
      margin: -1.5,
      accepted: false,
    },
  ],
  note: "beam search over 2 move kinds",
};

type Handler<A extends unknown[], R> = (...args: A) => Promise<R>;

export class FakeClient {
  calls: { method: string; args: unknown[] }[] = [];

  onCreateGraph: Handler<[string], GraphPayload> = async () => star4();
  onGraph: Handler<[string], GraphPayload> = async () => star4();
  onApply: Handler<[string, StepJson], GraphPayload> = async (_gid, step) =>
    star4({ history: [step], hash: "hash-after" });
  onUndo: Handler<[string], GraphPayload> = async () => star4();
  onEvaluate: Handler<[string, Record<string, unknown>], VerdictJson> = async () => verdict(false);
  onCost: Handler<[string, Record<string, unknown>], { cost: number }> = async () => ({ cost: 7.25 });
  onStress: Handler<[string, Record<string, unknown>], StressJson> = async () => STRESS;
  onStressAsync: Handler<[string, Record<string, unknown>], { job: string }> = async () => ({ job: "j1" });
  onPollJob: Handler<[string], StressJson> = async () => STRESS;
  onSuggest: Handler<[string, Record<string, unknown>], SuggestJson> = async () => SUGGESTIONS;

  private log<A extends unknown[], R>(method: string, handler: Handler<A, R>, args: A): Promise<R> {
    this.calls.push({ method, args });
    return handler(...args);
  }

  called(method: string): { method: string; args: unknown[] }[] {
    return this.calls.filter((c) => c.method === method);
  }

  createGraph(text: string) {
    return this.log("createGraph", this.onCreateGraph, [text]);
  }
  graph(gid: string) {
    return this.log("graph", this.onGraph, [gid]);
  }
  apply(gid: string, step: StepJson) {
    return this.log("apply", this.onApply, [gid, step]);
  }
  undo(gid: string) {
    return this.log("undo", this.onUndo, [gid]);
  }
  evaluate(gid: string, body: Record<string, unknown>) {
    return this.log("evaluate", this.onEvaluate, [gid, body]);
  }
  cost(gid: string, body: Record<string, unknown>) {
    return this.log("cost", this.onCost, [gid, body]);
  }
  stress(gid: string, body: Record<string, unknown>) {
    return this.log("stress", this.onStress, [gid, body]);
  }
  stressAsync(gid: string, body: Record<string, unknown>) {
    return this.log("stressAsync", this.onStressAsync, [gid, body]);
  }
  pollJob(jid: string) {
    return this.log("pollJob", this.onPollJob, [jid]);
  }
  suggest(gid: string, body: Record<string, unknown>) {
    return this.log("suggest", this.onSuggest, [gid, body]);
  }

  asClient(): Client {
    return this as unknown as Client;
  }
}

/** A promise whose settlement the test controls. */
export function deferred<T>(): { promise: Promise<T>; resolve: (v: T) => void; reject: (e: unknown) => void } {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
