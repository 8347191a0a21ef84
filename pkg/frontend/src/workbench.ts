import { PredictClient, ServiceError } from "./api.js";
import type { FetchFn } from "./api.js";
import {
  appendAttempt,
  initialState,
  validateSubmission,
  withBanner,
  withFieldError,
  withPending,
} from "./state.js";
import type { SessionState } from "./types.js";

export interface WorkbenchOptions {
  baseUrl?: string;
  fetchFn?: FetchFn;
  /** Clock override for deterministic tests. */
  now?: () => number;
  onChange?: (state: SessionState) => void;
}

/**
 * Session controller: owns the state and talks to the prediction service.
 * At most one prediction request is in flight; later submissions queue
 * behind it in order.
 */
export class Workbench {
  private state: SessionState = initialState();
  private queue: Promise<unknown> = Promise.resolve();
  private readonly client: PredictClient;
  private readonly now: () => number;
  private readonly onChange: ((state: SessionState) => void) | undefined;

  constructor(options: WorkbenchOptions = {}) {
    this.client = new PredictClient(options.baseUrl, options.fetchFn);
    this.now = options.now ?? Date.now;
    this.onChange = options.onChange;
  }

  getState(): SessionState {
    return this.state;
  }

  private setState(next: SessionState): void {
    this.state = next;
    this.onChange?.(next);
  }

  /**
   * Validate and score one revision. Validation failures block the
   * submission client-side; no request is made.
   */
  submit(s1: string, s2: string): Promise<SessionState> {
    const error = validateSubmission(s1, s2);
    if (error !== null) {
      this.setState(withFieldError(this.state, error));
      return Promise.resolve(this.state);
    }
    const run = this.queue.then(() => this.score(s1, s2));
    // keep the queue alive after a failed run
    this.queue = run.catch(() => undefined);
    return run;
  }

  private async score(s1: string, s2: string): Promise<SessionState> {
    this.setState(withPending(withFieldError(this.state, null), true));
    try {
      const verdict = await this.client.predict(s1, s2);
      this.setState(
        withPending(appendAttempt(this.state, s2, verdict, this.now()), false),
      );
    } catch (err) {
      // failures never touch history; they only raise the banner
      const message =
        err instanceof ServiceError ? err.message : "prediction failed";
      this.setState(withPending(withBanner(this.state, message), false));
    }
    return this.state;
  }
}
