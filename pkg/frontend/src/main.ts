/**
 * DOM binding for the summarization page.
 *
 * Renders the form, wires it to a SummarizeForm instance, and keeps the
 * page in sync with the form state: the spinner is visible exactly
 * while a request is pending, the submit control is disabled during
 * that window, and the returned summary is rendered verbatim.
 */

import { httpSummarize } from "./api.js";
import { SummarizeForm, type FormState } from "./state.js";

export const PAGE_TITLE = "Enhanced EHR Summarization System";

export const INSTRUCTIONS =
  "Paste the EHR passage into the context area, enter the topic or " +
  "question you want summarized, and press Summarize. The focused " +
  "summary appears below once the model responds.";

export function mountApp(root: HTMLElement, form: SummarizeForm): void {
  root.innerHTML = `
    <main class="ehrsum">
      <h1 id="title">${PAGE_TITLE}</h1>
      <p id="instructions">${INSTRUCTIONS}</p>
      <label for="context-input">EHR context</label>
      <textarea id="context-input" rows="8" placeholder="Paste the EHR passage here"></textarea>
      <label for="query-input">Area of focus</label>
      <input id="query-input" type="text" placeholder="e.g. recent medication changes" />
      <button id="submit-button" type="button">Summarize</button>
      <div id="spinner" role="status" hidden>Generating summary&hellip;</div>
      <div id="error-message" class="error" hidden></div>
      <section id="summary-section" hidden>
        <h2>Summary</h2>
        <p id="summary-output"></p>
      </section>
    </main>
  `;

  const contextInput = root.querySelector<HTMLTextAreaElement>("#context-input")!;
  const queryInput = root.querySelector<HTMLInputElement>("#query-input")!;
  const submitButton = root.querySelector<HTMLButtonElement>("#submit-button")!;
  const spinner = root.querySelector<HTMLElement>("#spinner")!;
  const errorMessage = root.querySelector<HTMLElement>("#error-message")!;
  const summarySection = root.querySelector<HTMLElement>("#summary-section")!;
  const summaryOutput = root.querySelector<HTMLElement>("#summary-output")!;

  contextInput.addEventListener("input", () => form.setContext(contextInput.value));
  queryInput.addEventListener("input", () => form.setQuery(queryInput.value));
  submitButton.addEventListener("click", () => void form.submit());

  const render = (state: FormState): void => {
    spinner.hidden = state.phase !== "pending";
    submitButton.disabled = state.phase === "pending";
    errorMessage.hidden = state.phase !== "error";
    errorMessage.textContent = state.phase === "error" ? state.errorMessage ?? "" : "";
    summarySection.hidden = state.phase !== "done";
    // textContent keeps the summary byte-for-byte; no client-side rewriting
    summaryOutput.textContent = state.phase === "done" ? state.summary ?? "" : "";
  };

  render(form.getState());
  form.subscribe(render);
}

declare global {
  interface Window {
    __API_BASE__?: string;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    mountApp(root, new SummarizeForm(httpSummarize()));
  }
}
