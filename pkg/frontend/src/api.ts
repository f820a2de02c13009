/** Typed client for the supervision service. All domain numbers the UI
 * displays come out of these calls. */

import type {
  GraphPayload,
  JobJson,
  MetricsJson,
  StepJson,
  StressJson,
  SuggestJson,
  VerdictJson,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function toError(res: Response): Promise<ApiError> {
  let code = "unknown";
  let message = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(res.status, code, message);
}

export class Client {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!res.ok) throw await toError(res);
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, { method: "POST", body: JSON.stringify(body) });
  }

  createGraph(text: string): Promise<GraphPayload> {
    return this.post("/graphs", { text });
  }

  graph(gid: string): Promise<GraphPayload> {
    return this.request(`/graphs/${gid}`);
  }

  metrics(gid: string, kinds?: string[]): Promise<MetricsJson> {
    const query = kinds ? `?kinds=${kinds.join(",")}` : "";
    return this.request(`/graphs/${gid}/metrics${query}`);
  }

  apply(gid: string, step: StepJson): Promise<GraphPayload> {
    return this.post(`/graphs/${gid}/apply`, step);
  }

  undo(gid: string): Promise<GraphPayload> {
    return this.post(`/graphs/${gid}/undo`, {});
  }

  evaluate(gid: string, body: Record<string, unknown>): Promise<VerdictJson> {
    return this.post(`/graphs/${gid}/evaluate`, body);
  }

  cost(gid: string, body: Record<string, unknown>): Promise<{ cost: number }> {
    return this.post(`/graphs/${gid}/cost`, body);
  }

  stress(gid: string, body: Record<string, unknown>): Promise<StressJson> {
    return this.post(`/graphs/${gid}/stress`, body);
  }

  stressAsync(gid: string, body: Record<string, unknown>): Promise<{ job: string }> {
    return this.post(`/graphs/${gid}/stress`, { ...body, async: true });
  }

  job(jid: string): Promise<JobJson> {
    return this.request(`/jobs/${jid}`);
  }

  /** Poll a job until it leaves "pending"; resolves with the stress result. */
  async pollJob(jid: string, intervalMs = 250, maxPolls = 400): Promise<StressJson> {
    for (let i = 0; i < maxPolls; i++) {
      const job = await this.job(jid);
      if (job.status === "done" && job.result) return job.result;
      if (job.status === "error") throw new ApiError(500, "job_failed", job.message ?? "job failed");
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
    throw new ApiError(504, "job_timeout", `job ${jid} still pending after ${maxPolls} polls`);
  }

  suggest(gid: string, body: Record<string, unknown>): Promise<SuggestJson> {
    return this.post(`/graphs/${gid}/suggest`, body);
  }

  rho(gid: string, body: Record<string, unknown>): Promise<{
    value: number | null;
    witness: StepJson[] | null;
    status: string;
  }> {
    return this.post(`/graphs/${gid}/rho`, body);
  }

  workspace(): Promise<Record<string, unknown>> {
    return this.request("/workspace");
  }

  putWorkspace(ws: Record<string, unknown>): Promise<{ graphs: number; presets: number }> {
    return this.request("/workspace", { method: "PUT", body: JSON.stringify(ws) });
  }
}
