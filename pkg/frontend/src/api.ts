/**
 * Typed client for the question-answering HTTP API. All workbench data
 * flows through here; responses are returned exactly as the service sent
 * them.
 */

import type {
  AnalyzeResponse,
  AnswerResponse,
  ErrorPayload,
  ExceptionReport,
  ExceptionRequest,
  KbTreeData,
  OntologySummary,
  PathResponse,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly payload: ErrorPayload,
  ) {
    super(payload.error ?? `service error ${status}`);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const payload = await response.json();
  if (!response.ok) {
    throw new ServiceError(response.status, payload as ErrorPayload);
  }
  return payload as T;
}

export class WorkbenchApi {
  constructor(private readonly baseUrl: string) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return parse<T>(response);
  }

  private async get<T>(path: string): Promise<T> {
    return parse<T>(await fetch(this.baseUrl + path));
  }

  analyze(question: string, pretagged?: boolean): Promise<AnalyzeResponse> {
    return this.post<AnalyzeResponse>("/analyze", { question, pretagged });
  }

  answer(question: string, pretagged?: boolean): Promise<AnswerResponse> {
    return this.post<AnswerResponse>("/answer", { question, pretagged });
  }

  choose(sessionId: string, choice: string): Promise<AnswerResponse> {
    return this.post<AnswerResponse>(`/answer/${sessionId}/choice`, { choice });
  }

  kbTree(): Promise<KbTreeData> {
    return this.get<KbTreeData>("/kb");
  }

  kbPath(question: string, pretagged?: boolean): Promise<PathResponse> {
    const params = new URLSearchParams({ question });
    if (pretagged) params.set("pretagged", "1");
    return this.get<PathResponse>(`/kb/path?${params}`);
  }

  addException(request: ExceptionRequest): Promise<ExceptionReport> {
    return this.post<ExceptionReport>("/kb/exception", request);
  }

  ontologySummary(): Promise<OntologySummary> {
    return this.get<OntologySummary>("/ontology/summary");
  }
}
