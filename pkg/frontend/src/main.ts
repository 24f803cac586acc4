/** Entry point: resolve the backend base URL and start the page. */

import { initChat, resolveBaseUrl } from "./app.js";

initChat(document, { baseUrl: resolveBaseUrl(document) });
