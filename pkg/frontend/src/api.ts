// Thin fetch wrapper over the annotation endpoints. fetch is injectable so
// tests can stub the network.

import { TaskView, VoteChoice, parseTaskView } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class NetworkError extends Error {}

export type NextTaskResult = { kind: "task"; view: TaskView } | { kind: "done" };

export type VoteResult = "accepted" | "conflict";

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    try {
      return await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new NetworkError(String(err));
    }
  }

  async nextTask(annotator: string): Promise<NextTaskResult> {
    const resp = await this.request(
      `/api/task/next?annotator=${encodeURIComponent(annotator)}`,
    );
    if (resp.status === 204) return { kind: "done" };
    if (resp.status === 200) {
      return { kind: "task", view: parseTaskView(await resp.json()) };
    }
    throw new ApiError(await describeError(resp), resp.status);
  }

  async submitVote(
    annotator: string,
    itemId: string,
    choice: VoteChoice,
  ): Promise<VoteResult> {
    const resp = await this.request("/api/vote", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ annotator, item_id: itemId, choice }),
    });
    if (resp.status === 200) return "accepted";
    if (resp.status === 409) return "conflict";
    throw new ApiError(await describeError(resp), resp.status);
  }

  summaryUrl(): string {
    return this.baseUrl + "/api/summary";
  }
}

async function describeError(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { error?: string };
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${resp.status}`;
}
