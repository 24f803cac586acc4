/** Response and view-model types for the chat client. */

/** Route names exactly as the server reports them. */
export type Route = "RULE" | "RAG" | "WORKFLOW" | "FALLBACK" | "EXIT";

/** One retrieval hit: chunk identifier plus cosine score. */
export interface TraceRow {
  chunk_id: string;
  score: number;
}

/** Body returned by POST /chat. */
export interface ChatResponse {
  reply: string;
  route: Route;
  session_terminated: boolean;
  intent?: string;
  confidence?: number;
  retrieval_trace?: TraceRow[];
}

/** Body returned by GET /health. */
export interface HealthResponse {
  status: "ok" | "starting";
  model_loaded: boolean;
  kb_chunks: number;
}

/** One bubble in the rendered history. */
export interface ChatMessage {
  sender: "user" | "bot";
  text: string;
  timestamp: number;
  route?: Route;
  intent?: string;
  confidence?: number;
  trace?: TraceRow[];
}

/** Everything the page needs to draw itself. */
export interface ChatState {
  sessionId: string | null;
  messages: ChatMessage[];
  busy: boolean;
  ended: boolean;
  error: string | null;
}
