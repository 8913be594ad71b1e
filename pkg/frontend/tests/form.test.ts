import { describe, expect, it } from "vitest";

import {
  SummarizeForm,
  blankField,
  initialState,
  type FormState,
  type SummarizeFn,
  type SummarizeResult,
} from "../src/state.js";

interface Stub {
  fn: SummarizeFn;
  calls: Array<{ context: string; query: string }>;
  resolve: (result: SummarizeResult) => void;
  reject: (reason: unknown) => void;
}

function makeStub(): Stub {
  const stub: Partial<Stub> = { calls: [] };
  stub.fn = (request) => {
    stub.calls!.push(request);
    return new Promise<SummarizeResult>((resolve, reject) => {
      stub.resolve = resolve;
      stub.reject = reject;
    });
  };
  return stub as Stub;
}

function filledForm(fn: SummarizeFn): SummarizeForm {
  const form = new SummarizeForm(fn);
  form.setContext("Lungs are clear. No pleural effusions.");
  form.setQuery("Give me information about the lungs.");
  return form;
}

describe("validation", () => {
  it("starts idle with empty fields", () => {
    expect(initialState()).toEqual({ contextText: "", queryText: "", phase: "idle" });
  });

  it("blank query produces a field error and zero requests", async () => {
    const stub = makeStub();
    const form = new SummarizeForm(stub.fn);
    form.setContext("some ehr text");
    form.setQuery("   ");
    const state = await form.submit();
    expect(state.phase).toBe("error");
    expect(state.errorMessage).toBe("query is required");
    expect(stub.calls).toHaveLength(0);
  });

  it("blank context produces a field error and zero requests", async () => {
    const stub = makeStub();
    const form = new SummarizeForm(stub.fn);
    form.setQuery("why was she treated?");
    const state = await form.submit();
    expect(state.phase).toBe("error");
    expect(state.errorMessage).toBe("context is required");
    expect(stub.calls).toHaveLength(0);
  });

  it("names the context field first when both are blank", () => {
    expect(blankField(initialState())).toBe("context");
  });
});

describe("submission", () => {
  it("moves through pending and renders the stub summary verbatim", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const phases: string[] = [];
    form.subscribe((state: FormState) => phases.push(state.phase));

    const submission = form.submit();
    expect(form.getState().phase).toBe("pending");

    const summary = "gram-positive cocci (>10µg/mL) in her sputum culture\n";
    stub.resolve({ status: 200, body: { summary } });
    const state = await submission;

    expect(state.phase).toBe("done");
    expect(state.summary).toBe(summary); // byte-for-byte, no rewriting
    expect(stub.calls).toHaveLength(1);
    expect(phases).toContain("pending");
    expect(phases[phases.length - 1]).toBe("done");
  });

  it("issues exactly one request per valid submission", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const first = form.submit();
    await form.submit(); // ignored: already pending
    expect(stub.calls).toHaveLength(1);
    stub.resolve({ status: 200, body: { summary: "s" } });
    await first;
    expect(stub.calls).toHaveLength(1);
  });

  it("allows a fresh submission after completion", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const first = form.submit();
    stub.resolve({ status: 200, body: { summary: "one" } });
    await first;
    const second = form.submit();
    stub.resolve({ status: 200, body: { summary: "two" } });
    const state = await second;
    expect(stub.calls).toHaveLength(2);
    expect(state.summary).toBe("two");
  });

  it("surfaces the timeout message on 504", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const submission = form.submit();
    stub.resolve({
      status: 504,
      body: { error: "Timeout", detail: "no answer within 10000 ms" },
    });
    const state = await submission;
    expect(state.phase).toBe("error");
    expect(state.errorMessage).toBe("no answer within 10000 ms");
    expect(state.summary).toBeUndefined();
  });

  it("names the field on a server-side MissingField error", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const submission = form.submit();
    stub.resolve({ status: 400, body: { error: "MissingField", field: "query" } });
    const state = await submission;
    expect(state.phase).toBe("error");
    expect(state.errorMessage).toBe("query is required");
  });

  it("reports a retry hint on network failure", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const submission = form.submit();
    stub.reject(new TypeError("fetch failed"));
    const state = await submission;
    expect(state.phase).toBe("error");
    expect(state.errorMessage).toContain("retry");
  });

  it("falls back to the status code when the error body is empty", async () => {
    const stub = makeStub();
    const form = filledForm(stub.fn);
    const submission = form.submit();
    stub.resolve({ status: 502, body: null });
    const state = await submission;
    expect(state.errorMessage).toBe("server error (status 502)");
  });
});
