/**
 * Workbench page wiring: binds the acquisition and disambiguation workflows
 * to the DOM. Serve the service (`rdrqa serve --port 8080`), then open
 * index.html (`npm run serve`).
 */

import { ServiceError, WorkbenchApi } from "./api.js";
import { pathAnimationFrames } from "./tree.js";
import {
  renderAnalysis,
  renderAnnotatedText,
  renderDiff,
  renderTree,
} from "./render.js";
import {
  AcquisitionWorkflow,
  DisambiguationWorkflow,
  type RuleDraft,
} from "./workflows.js";
import type { KbConclusionData } from "./types.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function describeError(error: unknown): string {
  if (error instanceof ServiceError) {
    const p = error.payload;
    if (p.line !== undefined) {
      const expected = p.expected?.length ? ` (expected ${p.expected.join(", ")})` : "";
      return `rule parse error at line ${p.line}, column ${p.column}${expected}: ${p.error}`;
    }
    if (p.cornerstone !== undefined) {
      return `consistency rejection — conflicts with stored cornerstone: “${p.cornerstone}”`;
    }
    return p.error;
  }
  return String(error);
}

export function boot(): void {
  const api = new WorkbenchApi(
    (element<HTMLInputElement>("service-url")).value || "http://127.0.0.1:8080",
  );
  const acquisition = new AcquisitionWorkflow(api);
  const disambiguation = new DisambiguationWorkflow(api);

  const errors = element<HTMLElement>("errors");
  const show = (id: string, html: string) => {
    element<HTMLElement>(id).innerHTML = html;
  };

  const run = (work: () => Promise<void>) => {
    errors.textContent = "";
    work().catch((error) => {
      errors.textContent = describeError(error);
    });
  };

  const refreshTreeFromState = async (animate: boolean) => {
    const { analysis, tree } = acquisition.state;
    if (!tree) return;
    const path = analysis?.path ?? [];
    const last = analysis?.last_fired ?? null;
    if (!animate) {
      show("tree-panel", renderTree(tree, path, last));
      return;
    }
    for (const frame of pathAnimationFrames(path)) {
      show("tree-panel", renderTree(tree, frame, frame[frame.length - 1] ?? null));
      await new Promise((resolve) => setTimeout(resolve, 120));
    }
    show("tree-panel", renderTree(tree, path, last));
  };

  const draft = (): RuleDraft => {
    const conclusionText = element<HTMLTextAreaElement>("rule-conclusion").value.trim();
    const extraText = element<HTMLTextAreaElement>("rule-extra").value.trim();
    return {
      ruleText: element<HTMLTextAreaElement>("rule-text").value,
      extra: extraText ? extraText.split("\n").filter((line) => line.trim()) : [],
      conclusion: conclusionText
        ? (JSON.parse(conclusionText) as KbConclusionData)
        : null,
    };
  };

  element<HTMLButtonElement>("ask").addEventListener("click", () =>
    run(async () => {
      const question = element<HTMLInputElement>("question").value;
      const pretagged = element<HTMLInputElement>("pretagged").checked;
      const state = await acquisition.ask(question, pretagged);
      show("analysis-panel", renderAnalysis(state.analysis!));
      show("annotation-panel", renderAnnotatedText(state.analysis!.document));
      show("diff-panel", "");
      await refreshTreeFromState(true);
    }),
  );

  element<HTMLButtonElement>("dry-run").addEventListener("click", () =>
    run(async () => {
      const report = await acquisition.dryRun(draft());
      show("diff-panel", renderDiff(report));
    }),
  );

  element<HTMLButtonElement>("commit").addEventListener("click", () =>
    run(async () => {
      const report = await acquisition.commit(draft());
      show("diff-panel", renderDiff(report));
      show("analysis-panel", renderAnalysis(acquisition.state.analysis!));
      await refreshTreeFromState(false);
    }),
  );

  const renderPhase = () => {
    const phase = disambiguation.phase;
    if (phase.kind === "pending") {
      const buttons = phase.pending.candidates
        .map((name, i) =>
          `<button class="candidate" data-i="${i}">${name}</button>`)
        .join(" ");
      show("answer-panel",
        `<p>pick the intended ${phase.pending.slot}:</p>${buttons} ` +
        `<button id="cancel-choice">cancel</button>`);
      for (const button of document.querySelectorAll<HTMLButtonElement>(".candidate")) {
        button.addEventListener("click", () =>
          run(async () => {
            const index = Number(button.dataset.i);
            await disambiguation.choose(phase.pending.candidates[index]!);
            renderPhase();
          }),
        );
      }
      element<HTMLButtonElement>("cancel-choice").addEventListener("click", () => {
        disambiguation.cancel();
        renderPhase();
      });
    } else if (phase.kind === "answered") {
      const items = phase.answer.items.map((i) => `<li>${i}</li>`).join("");
      show("answer-panel",
        `<p class="answer-text">${phase.answer.text.replaceAll("\n", "<br>")}</p>` +
        (items ? `<ul>${items}</ul>` : ""));
    } else if (phase.kind === "cancelled") {
      show("answer-panel", "<p>choice cancelled — ask again when ready</p>");
    }
  };

  element<HTMLButtonElement>("get-answer").addEventListener("click", () =>
    run(async () => {
      const question = element<HTMLInputElement>("question").value;
      const pretagged = element<HTMLInputElement>("pretagged").checked;
      await disambiguation.ask(question, pretagged);
      renderPhase();
    }),
  );
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
