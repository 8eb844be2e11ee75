// Typed client for the simulation API. The UI performs no simulation or
// analysis of its own: every number it renders comes out of these
// response payloads.

export interface TraceConfig {
  maxTime: number;
  sampleEvery: number;
  odeStep: number;
}

export interface TraceSample {
  t: number;
  state: Record<string, number>;
}

export type RunStatus = "completed" | "halted" | "failed";

export interface TraceRun {
  index: number;
  variant: Record<string, number>;
  status: RunStatus;
  samples: TraceSample[];
  error?: string;
}

export interface TraceResponse {
  config: TraceConfig;
  runs: TraceRun[];
}

export interface HistogramBin {
  t: number;
  count: number;
  total: number;
}

export interface HistogramResponse {
  query: { predicate: string; every: number; horizon: number };
  bins: HistogramBin[];
}

export interface Diagnostic {
  line: number;
  col: number;
  message: string;
}

export interface ParseResponse {
  ok: boolean;
  diagnostics: Diagnostic[];
}

export interface SimulateRequest {
  source: string;
  maxTime: number;
  sampleEvery: number;
  odeStep: number;
}

export interface HistogramRequest extends SimulateRequest {
  query: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly diagnostics: Diagnostic[] = [],
  ) {
    super(message);
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  const resp = await fetch(`${base}${path}`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const payload = await resp.json();
  if (!resp.ok) {
    const message =
      typeof payload?.error === "string"
        ? payload.error
        : `request failed with status ${resp.status}`;
    throw new ApiError(resp.status, message, payload?.diagnostics ?? []);
  }
  return payload as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  parse(source: string): Promise<ParseResponse> {
    return post(this.base, "/api/parse", { source });
  }

  simulate(request: SimulateRequest): Promise<TraceResponse> {
    return post(this.base, "/api/simulate", request);
  }

  histogram(request: HistogramRequest): Promise<HistogramResponse> {
    return post(this.base, "/api/histogram", request);
  }

  async health(): Promise<{ status: string; version: string }> {
    const resp = await fetch(`${this.base}/api/health`);
    return resp.json();
  }
}
