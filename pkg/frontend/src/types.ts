/**
 * Wire types for the question-answering service. These mirror the JSON the
 * HTTP API produces byte for byte; the workbench renders them without
 * re-deriving anything.
 */

export interface AnnotationData {
  id: number;
  type: string;
  start: number;
  end: number;
  features: Record<string, string>;
}

export interface DocumentData {
  text: string;
  annotations: AnnotationData[];
}

export interface QueryTupleData {
  sub: string;
  cat: string;
  t1: string | null;
  rel: string | null;
  t2: string | null;
  t3: string | null;
}

export interface IrData {
  structure: string;
  tuples: QueryTupleData[];
}

export interface AnalyzeResponse {
  ir: IrData | null;
  unanalyzed: boolean;
  path: number[];
  last_fired: number;
  document: DocumentData;
}

export interface PathResponse {
  path: number[];
  last_fired: number;
  ir: IrData | null;
  unanalyzed: boolean;
}

export interface KbConclusionData {
  structure: string;
  tuples: string[][];
}

export interface KbNodeData {
  id: number;
  rule_text: string | null;
  extra: string[];
  conclusion: KbConclusionData | null;
  except: number | null;
  false: number | null;
  cornerstone: string | null;
}

export interface KbTreeData {
  version: number;
  language: string;
  root: number;
  nodes: KbNodeData[];
}

export interface AnswerData {
  kind: string;
  items: string[];
  text: string;
  provenance: Record<string, unknown>[];
}

export interface PendingData {
  choice_id: string;
  slot: string;
  candidates: string[];
  context: string;
  session_id: string;
}

export type AnswerResponse = { answer: AnswerData } | { pending: PendingData };

export interface CornerstoneCheck {
  node: number;
  question: string;
  last_fired: number;
}

export interface ExceptionReport {
  node_id: number;
  before: IrData | null;
  after: IrData | null;
  path: number[];
  cornerstones: CornerstoneCheck[];
  dry_run?: boolean;
}

export interface ExceptionRequest {
  question: string;
  pretagged?: boolean;
  rule_text: string;
  extra?: string[];
  conclusion?: KbConclusionData | null;
  dry_run?: boolean;
}

export interface OntologySummary {
  concepts: number;
  relations: number;
  instances: number;
  assertions: number;
  concept_names: string[];
  relation_names: string[];
}

export interface ErrorPayload {
  error: string;
  line?: number;
  column?: number;
  expected?: string[];
  cornerstone?: string;
  slot?: string;
  term?: string;
}
