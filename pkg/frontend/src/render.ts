/** DOM rendering for the chat page. All user and bot text is set through
 * textContent, never innerHTML, so replies cannot inject markup. */

import type { ChatMessage, ChatState, TraceRow } from "./types.js";

/** Most trace rows ever shown, matching the service's retrieval depth. */
export const MAX_TRACE_ROWS = 5;

/** "greeting" -> "Greeting", for the intent badge. */
function titled(intent: string): string {
  return intent.charAt(0).toUpperCase() + intent.slice(1);
}

/** Intent badge text, e.g. "Intent: Greeting (confidence 0.56)". */
export function intentBadgeText(intent: string, confidence?: number): string {
  if (confidence === undefined) return `Intent: ${titled(intent)}`;
  return `Intent: ${titled(intent)} (confidence ${confidence.toFixed(2)})`;
}

function formatTime(timestamp: number): string {
  const d = new Date(timestamp);
  const hh = String(d.getHours()).padStart(2, "0");
  const mm = String(d.getMinutes()).padStart(2, "0");
  return `${hh}:${mm}`;
}

function renderTrace(rows: TraceRow[]): HTMLElement {
  const details = document.createElement("details");
  details.className = "trace";
  const summary = document.createElement("summary");
  summary.textContent = "retrieval trace";
  details.appendChild(summary);

  const table = document.createElement("table");
  for (const row of rows.slice(0, MAX_TRACE_ROWS)) {
    const tr = document.createElement("tr");
    const idCell = document.createElement("td");
    idCell.textContent = row.chunk_id;
    const scoreCell = document.createElement("td");
    scoreCell.textContent = row.score.toFixed(4);
    tr.append(idCell, scoreCell);
    table.appendChild(tr);
  }
  details.appendChild(table);
  return details;
}

function renderBubble(message: ChatMessage): HTMLElement {
  const bubble = document.createElement("div");
  bubble.className = `msg msg-${message.sender}`;
  if (message.route === "WORKFLOW") {
    bubble.classList.add("msg-prompt");
  }

  if (message.sender === "bot" && message.route) {
    const meta = document.createElement("div");
    meta.className = "msg-meta";

    const routeBadge = document.createElement("span");
    routeBadge.className = "badge badge-route";
    routeBadge.textContent = message.route;
    meta.appendChild(routeBadge);

    if (message.intent !== undefined) {
      const intentBadge = document.createElement("span");
      intentBadge.className = "badge badge-intent";
      intentBadge.textContent = intentBadgeText(message.intent, message.confidence);
      meta.appendChild(intentBadge);
    }
    bubble.appendChild(meta);
  }

  const text = document.createElement("div");
  text.className = "msg-text";
  text.textContent = message.text;
  bubble.appendChild(text);

  if (message.trace && message.trace.length > 0) {
    bubble.appendChild(renderTrace(message.trace));
  }

  const time = document.createElement("span");
  time.className = "msg-time";
  time.textContent = formatTime(message.timestamp);
  bubble.appendChild(time);

  return bubble;
}

/** Rebuild the history list in server turn order and keep it scrolled down. */
export function renderMessages(container: HTMLElement, messages: ChatMessage[]): void {
  container.innerHTML = "";
  for (const message of messages) {
    container.appendChild(renderBubble(message));
  }
  container.scrollTop = container.scrollHeight;
}

/** Show or hide the backend-error banner. */
export function renderBanner(banner: HTMLElement, error: string | null): void {
  banner.textContent = error ?? "";
  banner.hidden = error === null;
}

/** Disable the composer while a request is in flight or after exit. */
export function renderComposer(
  input: HTMLInputElement,
  send: HTMLButtonElement,
  notice: HTMLElement,
  state: ChatState
): void {
  const locked = state.busy || state.ended || state.sessionId === null;
  input.disabled = locked;
  send.disabled = locked;
  notice.hidden = !state.ended;
}
