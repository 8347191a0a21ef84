import type {
  Attempt,
  FieldError,
  SessionState,
  VerdictResponse,
} from "./types.js";

export function initialState(): SessionState {
  return { attempts: [], banner: null, fieldError: null, pending: false };
}

/** Collapse whitespace runs; mirrors the service's equality normalization. */
export function normalize(text: string): string {
  return text.split(/\s+/).filter(Boolean).join(" ");
}

/**
 * Client-side mirror of the service request validation, so bad
 * submissions are caught before any request is made.
 */
export function validateSubmission(s1: string, s2: string): FieldError | null {
  if (normalize(s1) === "") {
    return { field: "s1", message: "enter the original sentence" };
  }
  if (normalize(s2) === "") {
    return { field: "s2", message: "enter a revision" };
  }
  if (normalize(s1) === normalize(s2)) {
    return {
      field: "s2",
      message: "no revision detected: the revision matches the original",
    };
  }
  return null;
}

/* State transitions are pure: each returns a new state object so rendering
   stays a function of state and snapshots stay comparable. */

export function appendAttempt(
  state: SessionState,
  s2Text: string,
  verdict: VerdictResponse,
  timestamp: number,
): SessionState {
  const attempt: Attempt = {
    timestamp,
    s2Text,
    label: verdict.label,
    probability: verdict.probability,
    modelId: verdict.model_id,
    contributions: verdict.top_contributions,
  };
  return {
    ...state,
    attempts: [...state.attempts, attempt],
    banner: null,
    fieldError: null,
  };
}

export function withBanner(state: SessionState, message: string): SessionState {
  return { ...state, banner: message };
}

export function withFieldError(
  state: SessionState,
  error: FieldError | null,
): SessionState {
  return { ...state, fieldError: error };
}

export function withPending(state: SessionState, pending: boolean): SessionState {
  return { ...state, pending };
}
