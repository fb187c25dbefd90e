// Payload shapes mirroring the HTTP API (see backend README).

export type NodeKind = "theme" | "identity" | "location" | "sentiment";

export type SentimentSymbol = "+" | "-" | "0";

export interface GraphNodePayload {
  id: string;
  kind: NodeKind;
  label: string;
  size: number;
  counts?: { pos: number; neg: number; neu: number };
}

export interface GraphEdgePayload {
  a: string;
  b: string;
  weight: number;
  thickness: number;
}

export interface GraphPayload {
  nodes: GraphNodePayload[];
  edges: GraphEdgePayload[];
}

export interface TokenPayload {
  form: string;
  lemma: string;
  pos: string;
}

export interface LocationPayload {
  sentence: number;
  start: number;
  end: number;
  text: string;
}

export interface MentionPayload {
  mention_id: string;
  sentence: number;
  start: number;
  end: number;
  identity: string;
  category: string;
  label: SentimentSymbol | null;
}

export interface ParagraphPayload {
  paragraph_id: string;
  newspaper: string;
  issue_date: string;
  theme: string | null;
  sentences: TokenPayload[][];
  locations: LocationPayload[];
  mentions: MentionPayload[];
}

export interface ParagraphPage {
  node: string;
  total: number;
  limit: number;
  offset: number;
  results: ParagraphPayload[];
}

export interface ThemeCount {
  theme: string;
  paragraphs: number;
}

export interface GraphQuery {
  newspaper?: string;
  themes?: string[];
  minWeight?: number;
  from?: string;
  to?: string;
}
