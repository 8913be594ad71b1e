/**
 * Form state machine for the summarization page.
 *
 * The UI is a single form: an EHR context area, a focus-query box, and
 * a submit control. Submission validates locally first (a blank field
 * produces an error naming the field and no network request), then
 * moves through pending -> done/error around exactly one request.
 */

export type Phase = "idle" | "pending" | "done" | "error";

export interface FormState {
  contextText: string;
  queryText: string;
  phase: Phase;
  summary?: string;
  errorMessage?: string;
}

export interface SummarizeResult {
  status: number;
  body: unknown;
}

/** Transport hook: posts {context, query} and reports status plus JSON body. */
export type SummarizeFn = (request: {
  context: string;
  query: string;
}) => Promise<SummarizeResult>;

export const initialState = (): FormState => ({
  contextText: "",
  queryText: "",
  phase: "idle",
});

/** The blank field to report, in form order; null when both are filled. */
export function blankField(state: FormState): "context" | "query" | null {
  if (state.contextText.trim() === "") return "context";
  if (state.queryText.trim() === "") return "query";
  return null;
}

function errorMessageFrom(result: SummarizeResult): string {
  const body = result.body as Record<string, unknown> | null;
  if (body && typeof body === "object") {
    if (body.error === "MissingField" && typeof body.field === "string") {
      return `${body.field} is required`;
    }
    if (typeof body.detail === "string" && body.detail) return String(body.detail);
    if (typeof body.error === "string" && body.error) return String(body.error);
  }
  return `server error (status ${result.status})`;
}

export class SummarizeForm {
  private state: FormState = initialState();
  private listeners: Array<(state: FormState) => void> = [];

  constructor(private readonly summarize: SummarizeFn) {}

  getState(): FormState {
    return { ...this.state };
  }

  subscribe(listener: (state: FormState) => void): void {
    this.listeners.push(listener);
  }

  setContext(text: string): void {
    this.update({ contextText: text });
  }

  setQuery(text: string): void {
    this.update({ queryText: text });
  }

  /**
   * Validate and submit. A blank field moves straight to the error
   * phase with zero requests issued; while a request is in flight,
   * further submissions are ignored.
   */
  async submit(): Promise<FormState> {
    if (this.state.phase === "pending") return this.getState();

    const missing = blankField(this.state);
    if (missing !== null) {
      this.update({
        phase: "error",
        summary: undefined,
        errorMessage: `${missing} is required`,
      });
      return this.getState();
    }

    this.update({ phase: "pending", summary: undefined, errorMessage: undefined });
    let result: SummarizeResult;
    try {
      result = await this.summarize({
        context: this.state.contextText,
        query: this.state.queryText,
      });
    } catch {
      this.update({
        phase: "error",
        errorMessage: "network failure: check the connection and retry",
      });
      return this.getState();
    }

    if (result.status === 200) {
      const body = result.body as { summary?: unknown };
      const summary = typeof body?.summary === "string" ? body.summary : "";
      this.update({ phase: "done", summary });
    } else {
      this.update({ phase: "error", errorMessage: errorMessageFrom(result) });
    }
    return this.getState();
  }

  private update(patch: Partial<FormState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.getState());
  }
}
