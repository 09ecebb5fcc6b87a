/** Thin typed client for the netboost service; the console never computes
 * centralities itself, every number it shows comes from these responses. */

import type {
  GraphPayload,
  JobRecord,
  NetworkSummary,
  PathsResponse,
  WhatIfPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function parseError(res: Response): Promise<never> {
  let code = "HTTP_" + res.status;
  let message = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.code === "string") {
      code = body.code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the HTTP fallback
  }
  throw new ApiError(code, message, res.status);
}

export class NetboostApi {
  constructor(public readonly baseUrl: string) {}

  private async json<T>(res: Response): Promise<T> {
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  async uploadNetwork(netText: string): Promise<NetworkSummary> {
    const res = await fetch(`${this.baseUrl}/networks`, {
      method: "POST",
      headers: { "Content-Type": "text/plain" },
      body: netText,
    });
    return this.json(res);
  }

  async graph(networkId: string, withBetweenness = false): Promise<GraphPayload> {
    const q = withBetweenness ? "?with_betweenness=true" : "";
    return this.json(await fetch(`${this.baseUrl}/networks/${networkId}/graph${q}`));
  }

  async submitJob(networkId: string, body: Record<string, unknown>): Promise<string> {
    const res = await fetch(`${this.baseUrl}/networks/${networkId}/jobs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const out = await this.json<{ job_id: string }>(res);
    return out.job_id;
  }

  async job(jobId: string): Promise<JobRecord> {
    return this.json(await fetch(`${this.baseUrl}/jobs/${jobId}`));
  }

  async cancelJob(jobId: string): Promise<void> {
    const res = await fetch(`${this.baseUrl}/jobs/${jobId}/cancel`, { method: "POST" });
    if (!res.ok) await parseError(res);
  }

  async shortestPaths(
    networkId: string,
    s: string | number,
    t: string | number,
    jobId?: string,
  ): Promise<PathsResponse> {
    const body: Record<string, unknown> = { s, t };
    if (jobId) body.job_id = jobId;
    const res = await fetch(`${this.baseUrl}/networks/${networkId}/shortest-paths`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return this.json(res);
  }

  async whatIf(
    networkId: string,
    a: string | number,
    b: string | number,
    newWeight: number,
  ): Promise<WhatIfPayload> {
    const res = await fetch(`${this.baseUrl}/networks/${networkId}/what-if`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ a, b, new_weight: newWeight }),
    });
    return this.json(res);
  }
}
