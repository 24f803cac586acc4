/** Append-only conversation state with change notifications. */

import type { ChatMessage, ChatResponse, ChatState } from "./types.js";

type Listener = (state: ChatState) => void;

/**
 * Holds the session id, the message history, and the flags the page renders
 * from. History is append-only: messages are never reordered or dropped, so
 * the rendered transcript always matches the order turns were exchanged in.
 */
export class ChatStore {
  private state: ChatState = {
    sessionId: null,
    messages: [],
    busy: false,
    ended: false,
    error: null,
  };

  private listeners: Listener[] = [];
  private readonly now: () => number;

  constructor(now: () => number = Date.now) {
    this.now = now;
  }

  snapshot(): ChatState {
    return { ...this.state, messages: [...this.state.messages] };
  }

  /** Register a listener; it is called immediately with the current state. */
  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.snapshot());
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) listener(snap);
  }

  beginSession(sessionId: string): void {
    this.state.sessionId = sessionId;
    this.state.error = null;
    this.notify();
  }

  setBusy(busy: boolean): void {
    this.state.busy = busy;
    this.notify();
  }

  setError(message: string | null): void {
    this.state.error = message;
    this.notify();
  }

  addUserTurn(text: string): void {
    this.append({ sender: "user", text, timestamp: this.now() });
  }

  /** Append the bot bubble and mark the session ended on an EXIT turn. */
  addBotTurn(response: ChatResponse): void {
    const message: ChatMessage = {
      sender: "bot",
      text: response.reply,
      timestamp: this.now(),
      route: response.route,
    };
    if (response.intent !== undefined) message.intent = response.intent;
    if (response.confidence !== undefined) message.confidence = response.confidence;
    if (response.retrieval_trace !== undefined) {
      message.trace = response.retrieval_trace.map((row) => ({ ...row }));
    }
    if (response.session_terminated) this.state.ended = true;
    this.append(message);
  }

  private append(message: ChatMessage): void {
    this.state.messages.push(message);
    this.notify();
  }
}
