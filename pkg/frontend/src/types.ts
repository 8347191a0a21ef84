/** One feature the model weighed, as reported by the prediction service. */
export interface Contribution {
  name: string;
  value: number;
  importance: number;
}

/** Wire format of POST /api/v1/predict responses. */
export interface VerdictResponse {
  label: "Better" | "NotBetter";
  /** Probability that the revision improves on the original. */
  probability: number;
  top_contributions: Contribution[];
  model_id: string;
}

/** Wire format of GET /api/v1/health responses. */
export interface HealthResponse {
  status: string;
  model_id: string | null;
  schema_version: string | null;
}

/**
 * One scored revision attempt. The verdict fields come verbatim from a
 * single service response; the workbench never computes them locally.
 */
export interface Attempt {
  timestamp: number;
  s2Text: string;
  label: string;
  probability: number;
  modelId: string;
  contributions: Contribution[];
}

export interface FieldError {
  field: "s1" | "s2";
  message: string;
}

/**
 * Everything the page shows. Attempts are append-only and ordered by
 * submission; nothing is persisted, so a reload starts a fresh session.
 */
export interface SessionState {
  attempts: Attempt[];
  /** Service-failure message; inline and non-blocking. */
  banner: string | null;
  fieldError: FieldError | null;
  /** True while a prediction request is in flight. */
  pending: boolean;
}
