// Thin API client: query building, in-flight deduplication, bundle-hash staleness.

import type { GraphPayload, GraphQuery, ParagraphPage, SentimentSymbol, ThemeCount } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();
  private bundleHash: string | null = null;
  onBundleChange?: () => void;

  constructor(private base: string = "") {}

  private async getJSON<T>(path: string, params?: Record<string, string>): Promise<T> {
    const search = params ? new URLSearchParams(params).toString() : "";
    const url = this.base + path + (search ? `?${search}` : "");
    const pending = this.inflight.get(url);
    if (pending) return pending as Promise<T>;
    const request = this.fetchJSON<T>(url).finally(() => this.inflight.delete(url));
    this.inflight.set(url, request);
    return request;
  }

  private async fetchJSON<T>(url: string): Promise<T> {
    const response = await fetch(url);
    const hash = response.headers.get("X-Bundle-Hash");
    if (hash) {
      if (this.bundleHash !== null && this.bundleHash !== hash) {
        this.onBundleChange?.();
      }
      this.bundleHash = hash;
    }
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        const body = await response.json();
        message = body?.error?.message ?? message;
      } catch {
        // keep the status-only message
      }
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as T;
  }

  newspapers(): Promise<string[]> {
    return this.getJSON("/api/newspapers");
  }

  themes(newspaper?: string): Promise<ThemeCount[]> {
    return this.getJSON("/api/themes", newspaper ? { newspaper } : undefined);
  }

  graph(query: GraphQuery): Promise<GraphPayload> {
    const params: Record<string, string> = {};
    if (query.newspaper) params.newspaper = query.newspaper;
    if (query.themes && query.themes.length) params.themes = query.themes.join(",");
    if (query.minWeight && query.minWeight !== 1) params.min_weight = String(query.minWeight);
    if (query.from) params.from = query.from;
    if (query.to) params.to = query.to;
    return this.getJSON("/api/graph", params);
  }

  nodeParagraphs(
    nodeId: string,
    options: { limit?: number; offset?: number; sentiment?: SentimentSymbol | null } = {},
  ): Promise<ParagraphPage> {
    const params: Record<string, string> = {};
    if (options.limit !== undefined) params.limit = String(options.limit);
    if (options.offset) params.offset = String(options.offset);
    if (options.sentiment) params.sentiment = options.sentiment;
    return this.getJSON(`/api/nodes/${encodeURIComponent(nodeId)}/paragraphs`, params);
  }
}
