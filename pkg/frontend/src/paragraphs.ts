// Paragraph pane: retrieved passages with mention highlights and sentiment badges.

import type { MentionPayload, ParagraphPage, ParagraphPayload, SentimentSymbol } from "./types";

export interface ParagraphPaneHandlers {
  onPage: (page: number) => void;
  onSentiment: (sentiment: SentimentSymbol | null) => void;
}

const SENTIMENT_CLASSES: Record<SentimentSymbol, string> = {
  "+": "sent-pos",
  "-": "sent-neg",
  "0": "sent-neu",
};

export function paragraphElement(paragraph: ParagraphPayload): HTMLElement {
  const article = document.createElement("article");
  article.className = "paragraph";
  article.dataset.paragraphId = paragraph.paragraph_id;

  const head = document.createElement("header");
  head.textContent = `${paragraph.newspaper} · ${paragraph.issue_date} · ${paragraph.theme ?? "(no theme)"}`;
  article.appendChild(head);

  const mentionsBySentence = new Map<number, MentionPayload[]>();
  for (const mention of paragraph.mentions) {
    const list = mentionsBySentence.get(mention.sentence) ?? [];
    list.push(mention);
    mentionsBySentence.set(mention.sentence, list);
  }

  const body = document.createElement("p");
  paragraph.sentences.forEach((tokens, sentenceIndex) => {
    if (sentenceIndex > 0) body.appendChild(document.createTextNode(" "));
    const mentions = (mentionsBySentence.get(sentenceIndex) ?? []).slice().sort((a, b) => a.start - b.start);
    let cursor = 0;
    for (const mention of mentions) {
      if (mention.start > cursor) {
        body.appendChild(document.createTextNode(joinForms(tokens, cursor, mention.start) + " "));
      }
      const mark = document.createElement("mark");
      mark.className = mention.label ? SENTIMENT_CLASSES[mention.label] : "sent-unknown";
      mark.dataset.identity = mention.identity;
      mark.textContent = joinForms(tokens, mention.start, mention.end);
      body.appendChild(mark);
      const badge = document.createElement("sup");
      badge.className = "sentiment-badge";
      badge.textContent = mention.label ?? "?";
      body.appendChild(badge);
      body.appendChild(document.createTextNode(" "));
      cursor = mention.end;
    }
    if (cursor < tokens.length) {
      body.appendChild(document.createTextNode(joinForms(tokens, cursor, tokens.length)));
    }
  });
  article.appendChild(body);
  return article;
}

function joinForms(tokens: { form: string }[], start: number, end: number): string {
  return tokens
    .slice(start, end)
    .map((t) => t.form)
    .join(" ");
}

export function renderParagraphPane(
  container: HTMLElement,
  nodeId: string,
  page: ParagraphPage,
  sentiment: SentimentSymbol | null,
  handlers: ParagraphPaneHandlers,
): void {
  container.replaceChildren();

  const head = document.createElement("div");
  head.className = "pane-head";
  const title = document.createElement("h2");
  title.textContent = `${nodeId} — ${page.total} paragraph${page.total === 1 ? "" : "s"}`;
  head.appendChild(title);

  const chips = document.createElement("div");
  chips.className = "sentiment-chips";
  const options: Array<[string, SentimentSymbol | null]> = [
    ["all", null],
    ["+", "+"],
    ["−", "-"],
    ["0", "0"],
  ];
  for (const [label, value] of options) {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = "chip" + (sentiment === value ? " chip-active" : "");
    chip.dataset.sentiment = value ?? "all";
    chip.textContent = label;
    chip.addEventListener("click", () => handlers.onSentiment(value));
    chips.appendChild(chip);
  }
  head.appendChild(chips);
  container.appendChild(head);

  for (const paragraph of page.results) {
    container.appendChild(paragraphElement(paragraph));
  }

  const currentPage = Math.floor(page.offset / page.limit);
  const lastPage = Math.max(0, Math.ceil(page.total / page.limit) - 1);
  const nav = document.createElement("div");
  nav.className = "pager";
  const prev = document.createElement("button");
  prev.type = "button";
  prev.textContent = "‹ prev";
  prev.disabled = currentPage === 0;
  prev.addEventListener("click", () => handlers.onPage(currentPage - 1));
  const status = document.createElement("span");
  status.textContent = `page ${currentPage + 1} / ${lastPage + 1}`;
  const next = document.createElement("button");
  next.type = "button";
  next.textContent = "next ›";
  next.disabled = currentPage >= lastPage;
  next.addEventListener("click", () => handlers.onPage(currentPage + 1));
  nav.append(prev, status, next);
  container.appendChild(nav);
}

export function renderFetchError(container: HTMLElement, message: string, retry: () => void): void {
  container.replaceChildren();
  const box = document.createElement("div");
  box.className = "fetch-error";
  const text = document.createElement("p");
  text.textContent = `Could not load data: ${message}`;
  const button = document.createElement("button");
  button.type = "button";
  button.className = "retry";
  button.textContent = "Retry";
  button.addEventListener("click", retry);
  box.append(text, button);
  container.appendChild(box);
}
