import type { HealthResponse, VerdictResponse } from "./types.js";

export const DEFAULT_BASE_URL = "http://127.0.0.1:8000";
export const API_PREFIX = "/api/v1";

export type FetchFn = typeof fetch;

/** A failed call to the prediction service, with the HTTP status if any. */
export class ServiceError extends Error {
  readonly status: number | null;

  constructor(message: string, status: number | null = null) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
  }
}

async function describeFailure(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") {
      return body.detail;
    }
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  return `prediction service returned ${response.status}`;
}

/** Thin client for the prediction service HTTP API. */
export class PredictClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchFn;

  constructor(baseUrl: string = DEFAULT_BASE_URL, fetchFn?: FetchFn) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // wrap the global so it keeps its own receiver in browsers
    this.fetchFn = fetchFn ?? ((...args) => fetch(...args));
  }

  async predict(s1: string, s2: string): Promise<VerdictResponse> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${API_PREFIX}/predict`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ s1, s2 }),
      });
    } catch {
      throw new ServiceError("prediction service unreachable");
    }
    if (!response.ok) {
      throw new ServiceError(await describeFailure(response), response.status);
    }
    return (await response.json()) as VerdictResponse;
  }

  async health(): Promise<HealthResponse> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${API_PREFIX}/health`);
    } catch {
      throw new ServiceError("prediction service unreachable");
    }
    return (await response.json()) as HealthResponse;
  }
}
