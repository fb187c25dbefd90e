// View state <-> URL hash codec; every state change is shareable as a link.

import type { SentimentSymbol } from "./types";

export interface ViewState {
  newspapers: string[];
  themes: string[];
  minWeight: number;
  compare: boolean;
  selectedNode: string | null;
  page: number;
  sentiment: SentimentSymbol | null;
}

export const DEFAULT_STATE: ViewState = {
  newspapers: [],
  themes: [],
  minWeight: 1,
  compare: false,
  selectedNode: null,
  page: 0,
  sentiment: null,
};

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.newspapers.length) params.set("np", state.newspapers.join(","));
  if (state.themes.length) params.set("themes", state.themes.join("|"));
  if (state.minWeight !== 1) params.set("minw", String(state.minWeight));
  if (state.compare) params.set("cmp", "1");
  if (state.selectedNode !== null) params.set("node", state.selectedNode);
  if (state.page !== 0) params.set("page", String(state.page));
  if (state.sentiment !== null) params.set("sent", state.sentiment);
  return params.toString();
}

export function decodeState(hash: string): ViewState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const params = new URLSearchParams(raw);
  const minw = Number(params.get("minw") ?? "1");
  const page = Number(params.get("page") ?? "0");
  const sent = params.get("sent");
  return {
    newspapers: splitList(params.get("np"), ","),
    themes: splitList(params.get("themes"), "|"),
    minWeight: Number.isFinite(minw) && minw >= 1 ? Math.floor(minw) : 1,
    compare: params.get("cmp") === "1",
    selectedNode: params.get("node"),
    page: Number.isFinite(page) && page >= 0 ? Math.floor(page) : 0,
    sentiment: sent === "+" || sent === "-" || sent === "0" ? sent : null,
  };
}

function splitList(raw: string | null, sep: string): string[] {
  if (!raw) return [];
  return raw.split(sep).filter((item) => item.length > 0);
}
