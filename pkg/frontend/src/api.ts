/** Typed client for the chat service's JSON API. */

import type { ChatResponse, HealthResponse } from "./types.js";

const DEFAULT_TIMEOUT_MS = 15000;

/** Error carrying the HTTP status and the server's detail message. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

function requestSignal(timeoutMs: number): AbortSignal | undefined {
  if (typeof AbortSignal !== "undefined" && "timeout" in AbortSignal) {
    return AbortSignal.timeout(timeoutMs);
  }
  return undefined;
}

async function errorFrom(res: Response): Promise<ApiError> {
  let detail = `HTTP ${res.status}`;
  try {
    // The service reports problems as {"error": ...}; the framework's own
    // errors (method not allowed, etc.) arrive as {"detail": ...}.
    const body = await res.json();
    if (body && typeof body.error === "string") {
      detail = body.error;
    } else if (body && typeof body.detail === "string") {
      detail = body.detail;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(res.status, detail);
}

export class ChatApi {
  readonly baseUrl: string;
  private readonly timeoutMs: number;

  /**
   * @param baseUrl - Backend origin, e.g. "http://127.0.0.1:8000".
   *   Empty string targets the page's own origin.
   */
  constructor(baseUrl = "", timeoutMs = DEFAULT_TIMEOUT_MS) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.timeoutMs = timeoutMs;
  }

  /** Create a session and return its id. */
  async createSession(): Promise<string> {
    const res = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      signal: requestSignal(this.timeoutMs),
    });
    if (!res.ok) throw await errorFrom(res);
    const data = await res.json();
    return String(data.session_id);
  }

  /** Send one turn and return the routed reply. */
  async sendTurn(sessionId: string, text: string): Promise<ChatResponse> {
    const res = await fetch(`${this.baseUrl}/chat`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, text }),
      signal: requestSignal(this.timeoutMs),
    });
    if (!res.ok) throw await errorFrom(res);
    return (await res.json()) as ChatResponse;
  }

  /** Fetch readiness and knowledge-base size. */
  async fetchHealth(): Promise<HealthResponse> {
    const res = await fetch(`${this.baseUrl}/health`, {
      signal: requestSignal(this.timeoutMs),
    });
    if (!res.ok) throw await errorFrom(res);
    return (await res.json()) as HealthResponse;
  }
}
