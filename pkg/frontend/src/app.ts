/** Page wiring: one session per load, one request in flight at a time. */

import { ApiError, ChatApi } from "./api.js";
import { renderBanner, renderComposer, renderMessages } from "./render.js";
import { ChatStore } from "./store.js";

export interface ChatController {
  store: ChatStore;
  /** Send one turn through the same path the form uses. */
  send(text: string): Promise<void>;
  /** Resolves once every queued request has settled. */
  whenIdle(): Promise<void>;
}

export interface InitOptions {
  api?: ChatApi;
  store?: ChatStore;
  baseUrl?: string;
}

declare global {
  interface Window {
    SHONACHAT_BASE_URL?: string;
  }
}

/** Window global first, then the meta tag, then the page's own origin. */
export function resolveBaseUrl(doc: Document): string {
  if (typeof window !== "undefined" && window.SHONACHAT_BASE_URL) {
    return window.SHONACHAT_BASE_URL;
  }
  const meta = doc.querySelector('meta[name="backend-base-url"]');
  return meta?.getAttribute("content") ?? "";
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  if (err instanceof Error) return `Cannot reach the chat service (${err.message}).`;
  return "Cannot reach the chat service.";
}

/**
 * Look up the page elements, wire the store to the renderers, and create the
 * session. Returns a controller the page (and tests) drive turns through.
 */
export function initChat(doc: Document, options: InitOptions = {}): ChatController {
  const log = doc.getElementById("chat-log") as HTMLElement | null;
  const form = doc.getElementById("chat-form") as HTMLFormElement | null;
  const input = doc.getElementById("chat-input") as HTMLInputElement | null;
  const send = doc.getElementById("chat-send") as HTMLButtonElement | null;
  const banner = doc.getElementById("error-banner") as HTMLElement | null;
  const notice = doc.getElementById("ended-notice") as HTMLElement | null;
  const status = doc.getElementById("backend-status") as HTMLElement | null;
  if (!log || !form || !input || !send || !banner || !notice) {
    throw new Error("chat page is missing required elements");
  }

  const api = options.api ?? new ChatApi(options.baseUrl ?? "");
  const store = options.store ?? new ChatStore();
  let pending: Promise<void> = Promise.resolve();

  store.subscribe((state) => {
    renderMessages(log, state.messages);
    renderBanner(banner, state.error);
    renderComposer(input, send, notice, state);
  });

  const queue = (work: () => Promise<void>): Promise<void> => {
    pending = pending.then(work);
    return pending;
  };

  const sendTurn = async (raw: string): Promise<void> => {
    const text = raw.trim();
    const state = store.snapshot();
    if (!text || state.busy || state.ended || state.sessionId === null) return;

    input.value = "";
    store.addUserTurn(text);
    store.setBusy(true);
    try {
      const response = await api.sendTurn(state.sessionId, text);
      store.addBotTurn(response);
      store.setError(null);
    } catch (err) {
      store.setError(describe(err));
    } finally {
      store.setBusy(false);
      if (!store.snapshot().ended) input.focus();
    }
  };

  form.addEventListener("submit", (evt) => {
    evt.preventDefault();
    void queue(() => sendTurn(input.value));
  });

  // One session per page load; reloading starts a fresh conversation.
  void queue(async () => {
    store.setBusy(true);
    try {
      const sessionId = await api.createSession();
      store.beginSession(sessionId);
      if (status) {
        const health = await api.fetchHealth();
        status.textContent = `connected: ${health.kb_chunks} knowledge chunks`;
      }
    } catch (err) {
      store.setError(describe(err));
    } finally {
      store.setBusy(false);
    }
  });

  return {
    store,
    send: (text: string) => queue(() => sendTurn(text)),
    whenIdle: () => pending,
  };
}
