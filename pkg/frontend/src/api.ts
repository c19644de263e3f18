// Typed client over the HTTP API. The fetch implementation is injectable
// so tests can run without a server.

import type {
  AnnotationRecord,
  AnnotationSummary,
  BehaviorCatalog,
  ClientTurn,
  PracticeTurnResult,
  ProblemDetail,
  Profile,
  Questionnaire,
  ResetPoints,
  Scenario,
  SessionState,
  SessionView,
  Transcript,
} from "./types";

export class ApiError extends Error {
  readonly problem: ProblemDetail;

  constructor(problem: ProblemDetail) {
    super(problem.detail || problem.title);
    this.problem = problem;
  }

  get code(): string {
    return this.problem.code;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body instanceof FormData) {
      init.body = body;
    } else if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(payload as ProblemDetail);
    }
    return payload as T;
  }

  createSession(): Promise<SessionView> {
    return this.request("POST", "/api/sessions");
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  uploadScreenshots(id: string, files: File[]): Promise<{ state: SessionState; transcript: Transcript }> {
    const form = new FormData();
    for (const file of files) form.append("images", file);
    return this.request("POST", `/api/sessions/${id}/screenshots`, form);
  }

  estimate(id: string): Promise<{ state: SessionState; questionnaires: Record<string, Questionnaire> }> {
    return this.request("POST", `/api/sessions/${id}/estimates`);
  }

  adjustQuestionnaire(
    id: string,
    partner: "self" | "partner",
    edits: Array<{ index: number; score: number }>,
  ): Promise<{ state: SessionState; questionnaire: Questionnaire }> {
    return this.request("PUT", `/api/sessions/${id}/questionnaire/${partner}`, { edits });
  }

  finalizeStyles(id: string): Promise<{ state: SessionState; profiles: Record<string, Profile> }> {
    return this.request("POST", `/api/sessions/${id}/finalize-styles`);
  }

  generateDialogue(
    id: string,
    topic?: string,
  ): Promise<{ state: SessionState; scenario: Scenario; turns: ClientTurn[] }> {
    return this.request("POST", `/api/sessions/${id}/dialogue`, topic ? { topic } : {});
  }

  annotate(
    id: string,
    turnIndex: number,
    label: string | null,
  ): Promise<{ state: SessionState; record: AnnotationRecord; annotated_count: number }> {
    return this.request("POST", `/api/sessions/${id}/annotations`, {
      turn_index: turnIndex,
      label,
    });
  }

  annotationSummary(id: string): Promise<{ state: SessionState; summary: AnnotationSummary }> {
    return this.request("GET", `/api/sessions/${id}/annotation-summary`);
  }

  resetPoints(id: string): Promise<ResetPoints> {
    return this.request("GET", `/api/sessions/${id}/reset-points`);
  }

  practiceReset(id: string, turnIndex: number): Promise<{ state: SessionState; branch: SessionView["practice"]["branches"][string] }> {
    return this.request("POST", `/api/sessions/${id}/practice/reset`, { turn_index: turnIndex });
  }

  practiceTurn(id: string, text: string, dryRun = false): Promise<PracticeTurnResult> {
    return this.request("POST", `/api/sessions/${id}/practice/turns`, {
      text,
      dry_run: dryRun,
    });
  }

  behaviorCatalog(): Promise<BehaviorCatalog> {
    return this.request("GET", "/api/catalogs/behaviors");
  }
}
