/**
 * The two human-in-the-loop workflows.
 *
 * Acquisition: ask a question, inspect its annotations, evaluation path and
 * (possibly wrong) analysis, author a correcting rule, dry-run it to preview
 * the corrected analysis and the consistency report, then commit.
 *
 * Disambiguation: ask for an answer; when ontology mapping offers several
 * candidates, pick one and resume the same session until an answer arrives.
 *
 * Neither workflow computes anything itself: every field it stores is the
 * untouched service response.
 */

import type { WorkbenchApi } from "./api.js";
import type {
  AnalyzeResponse,
  AnswerData,
  ExceptionReport,
  KbConclusionData,
  KbTreeData,
  PendingData,
} from "./types.js";

export interface RuleDraft {
  ruleText: string;
  extra: string[];
  conclusion: KbConclusionData | null;
}

export interface AcquisitionState {
  question: string;
  pretagged: boolean;
  analysis: AnalyzeResponse | null;
  tree: KbTreeData | null;
  dryRunReport: ExceptionReport | null;
  committedReport: ExceptionReport | null;
}

export class AcquisitionWorkflow {
  state: AcquisitionState = {
    question: "",
    pretagged: false,
    analysis: null,
    tree: null,
    dryRunReport: null,
    committedReport: null,
  };

  constructor(private readonly api: WorkbenchApi) {}

  async ask(question: string, pretagged = false): Promise<AcquisitionState> {
    const [analysis, tree] = await Promise.all([
      this.api.analyze(question, pretagged),
      this.api.kbTree(),
    ]);
    this.state = {
      question,
      pretagged,
      analysis,
      tree,
      dryRunReport: null,
      committedReport: null,
    };
    return this.state;
  }

  async dryRun(draft: RuleDraft): Promise<ExceptionReport> {
    const report = await this.api.addException({
      question: this.state.question,
      pretagged: this.state.pretagged,
      rule_text: draft.ruleText,
      extra: draft.extra,
      conclusion: draft.conclusion,
      dry_run: true,
    });
    this.state.dryRunReport = report;
    return report;
  }

  async commit(draft: RuleDraft): Promise<ExceptionReport> {
    const report = await this.api.addException({
      question: this.state.question,
      pretagged: this.state.pretagged,
      rule_text: draft.ruleText,
      extra: draft.extra,
      conclusion: draft.conclusion,
    });
    this.state.committedReport = report;
    // the tree view refreshes from the service, never locally patched
    this.state.tree = await this.api.kbTree();
    this.state.analysis = await this.api.analyze(
      this.state.question,
      this.state.pretagged,
    );
    return report;
  }
}

export type DisambiguationPhase =
  | { kind: "idle" }
  | { kind: "pending"; pending: PendingData }
  | { kind: "answered"; answer: AnswerData }
  | { kind: "cancelled" };

export class DisambiguationWorkflow {
  phase: DisambiguationPhase = { kind: "idle" };
  private question = "";
  private pretagged = false;

  constructor(private readonly api: WorkbenchApi) {}

  async ask(question: string, pretagged = false): Promise<DisambiguationPhase> {
    this.question = question;
    this.pretagged = pretagged;
    return this.apply(await this.api.answer(question, pretagged));
  }

  async choose(candidate: string): Promise<DisambiguationPhase> {
    if (this.phase.kind !== "pending") {
      throw new Error("no pending choice to resolve");
    }
    return this.apply(
      await this.api.choose(this.phase.pending.session_id, candidate),
    );
  }

  /** Abandon the pending session; no answer is produced. */
  cancel(): DisambiguationPhase {
    this.phase = { kind: "cancelled" };
    return this.phase;
  }

  private apply(
    response: Awaited<ReturnType<WorkbenchApi["answer"]>>,
  ): DisambiguationPhase {
    this.phase =
      "pending" in response
        ? { kind: "pending", pending: response.pending }
        : { kind: "answered", answer: response.answer };
    return this.phase;
  }
}
