/**
 * Typed client for the clustering service.  Every workbench mutation goes
 * through here; the UI never computes cluster assignments itself.
 */

export interface Components {
  assignment: number[];
  k: number;
}

export interface ChildRef {
  component: number;
  session: string;
  kind: "divide" | "conquer";
}

export interface Layout {
  id: string;
  dataset: string;
  kind: string;
  n: number;
  dim: number;
  sigma: number;
  metric: string;
  method: string;
  root: number;
  node_ids: number[];
  edges: [number, number, number][]; // child, parent, length
  cuts: number[];
  coords: number[][];
  potential_axis: number[];
  stress: number;
  offsets: [number, number[]][];
  components: Components;
  children: ChildRef[];
  constraints: {
    must_link: [number, number][];
    cannot_link: [number, number][];
    labels: [number, number][];
  };
}

export interface CrossResponse {
  edge: number;
  components: Components;
}

export interface ViolationReport {
  must_link: [number, number][];
  cannot_link: [number, number][];
  mixed_label_components: [number, number[]][];
}

export interface JobStatus {
  status: "pending" | "done" | "failed";
  session?: string;
  error?: string;
}

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export interface DatasetParams {
  attr_kind: "numeric" | "categorical";
  label_column?: number;
  name?: string;
}

export interface SessionParams {
  dataset: string;
  sigma: number | "auto";
  dim?: number;
  method?: "classical" | "smacof";
  metric?: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public base: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      let code = "http_error";
      let message = `${resp.status}`;
      try {
        const body = (await resp.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(code, message, resp.status);
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  uploadDataset(csv: string, params: DatasetParams): Promise<{ dataset: string; n: number; d: number }> {
    const query = new URLSearchParams({ attr_kind: params.attr_kind });
    if (params.label_column !== undefined) query.set("label_column", String(params.label_column));
    if (params.name) query.set("name", params.name);
    return this.request(`/datasets?${query}`, { method: "POST", body: csv });
  }

  createSession(params: SessionParams): Promise<{ session?: string; layout?: Layout; job?: string }> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(params),
    });
  }

  layout(sessionId: string): Promise<Layout> {
    return this.request(`/sessions/${sessionId}`);
  }

  placeCross(sessionId: string, point: number[]): Promise<CrossResponse> {
    return this.request(`/sessions/${sessionId}/crosses`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ point }),
    });
  }

  restore(sessionId: string, edge: number): Promise<{ components: Components }> {
    return this.request(`/sessions/${sessionId}/restore`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ edge }),
    });
  }

  setOffset(sessionId: string, component: number, delta: number[]): Promise<{ ok: boolean }> {
    return this.request(`/sessions/${sessionId}/offset`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ component, delta }),
    });
  }

  divide(sessionId: string, component: number): Promise<{ session: string; layout: Layout }> {
    return this.request(`/sessions/${sessionId}/divide`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ component }),
    });
  }

  conquer(sessionId: string, component: number, sigma: number): Promise<{ session: string; layout: Layout }> {
    return this.request(`/sessions/${sessionId}/conquer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ component, sigma }),
    });
  }

  setConstraints(
    sessionId: string,
    constraints: { must_link: number[][]; cannot_link: number[][]; labels: number[][] },
  ): Promise<{ ok: boolean }> {
    return this.request(`/sessions/${sessionId}/constraints`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(constraints),
    });
  }

  violations(sessionId: string): Promise<ViolationReport> {
    return this.request(`/sessions/${sessionId}/violations`);
  }

  async assignmentCsv(sessionId: string): Promise<Map<number, number>> {
    const resp = await this.fetchImpl(`${this.base}/sessions/${sessionId}/assignment`);
    if (!resp.ok) throw new ApiError("http_error", `${resp.status}`, resp.status);
    const text = await resp.text();
    const out = new Map<number, number>();
    for (const line of text.trim().split("\n").slice(1)) {
      const [node, comp] = line.split(",");
      out.set(Number(node), Number(comp));
    }
    return out;
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request(`/jobs/${jobId}`);
  }
}
