// Application shell: controls, graph view(s), paragraph pane, URL-synced state.

import { ApiClient } from "./api";
import { diffGraphs } from "./diff";
import { renderGraph } from "./graphview";
import { renderFetchError, renderParagraphPane } from "./paragraphs";
import { DEFAULT_STATE, ViewState, decodeState, encodeState } from "./state";
import type { GraphPayload, SentimentSymbol, ThemeCount } from "./types";

export const PAGE_SIZE = 10;

export class App {
  state: ViewState;
  newspapers: string[] = [];
  themes: ThemeCount[] = [];

  private controlsEl: HTMLElement;
  private graphsEl: HTMLElement;
  private paneEl: HTMLElement;
  private displayed: GraphPayload[] = [];

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    initialHash: string = typeof location !== "undefined" ? location.hash : "",
  ) {
    this.state = initialHash ? decodeState(initialHash) : { ...DEFAULT_STATE };
    this.controlsEl = document.createElement("nav");
    this.controlsEl.className = "controls";
    this.graphsEl = document.createElement("main");
    this.graphsEl.className = "graphs";
    this.paneEl = document.createElement("aside");
    this.paneEl.className = "paragraph-pane";
    this.root.replaceChildren(this.controlsEl, this.graphsEl, this.paneEl);
  }

  async init(): Promise<void> {
    try {
      [this.newspapers, this.themes] = await Promise.all([this.api.newspapers(), this.api.themes()]);
    } catch (error) {
      renderFetchError(this.graphsEl, describe(error), () => void this.init());
      return;
    }
    if (this.state.compare && this.state.newspapers.length !== 2) {
      this.state.newspapers = this.newspapers.slice(0, 2);
    }
    this.renderControls();
    await this.refreshGraphs();
    if (this.state.selectedNode) {
      await this.refreshParagraphs();
    }
  }

  private syncHash(): void {
    if (typeof location !== "undefined") {
      const encoded = encodeState(this.state);
      const target = encoded ? `#${encoded}` : "#";
      if (location.hash !== target) location.hash = target;
    }
  }

  private async update(mutate: (state: ViewState) => void): Promise<void> {
    mutate(this.state);
    this.syncHash();
    this.renderControls();
    await this.refreshGraphs();
    if (this.state.selectedNode) await this.refreshParagraphs();
  }

  private renderControls(): void {
    this.controlsEl.replaceChildren();

    const compareLabel = document.createElement("label");
    compareLabel.className = "compare-toggle";
    const compareBox = document.createElement("input");
    compareBox.type = "checkbox";
    compareBox.checked = this.state.compare;
    compareBox.addEventListener("change", () => {
      void this.update((s) => {
        s.compare = compareBox.checked;
        s.newspapers = compareBox.checked ? this.newspapers.slice(0, 2) : [];
      });
    });
    compareLabel.append(compareBox, document.createTextNode(" compare newspapers"));
    this.controlsEl.appendChild(compareLabel);

    if (this.state.compare) {
      for (const side of [0, 1]) {
        this.controlsEl.appendChild(
          this.newspaperSelect(`paper-${side}`, this.state.newspapers[side] ?? "", (value) => {
            void this.update((s) => {
              s.newspapers[side] = value;
            });
          }, false),
        );
      }
    } else {
      this.controlsEl.appendChild(
        this.newspaperSelect("paper-single", this.state.newspapers[0] ?? "", (value) => {
          void this.update((s) => {
            s.newspapers = value ? [value] : [];
          });
        }, true),
      );
    }

    const themesBox = document.createElement("fieldset");
    themesBox.className = "themes";
    const legend = document.createElement("legend");
    legend.textContent = "themes";
    themesBox.appendChild(legend);
    for (const { theme } of this.themes) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = theme;
      box.checked = this.state.themes.includes(theme);
      box.addEventListener("change", () => {
        void this.update((s) => {
          s.themes = box.checked
            ? [...s.themes, theme].sort()
            : s.themes.filter((t) => t !== theme);
        });
      });
      label.append(box, document.createTextNode(` ${theme}`));
      themesBox.appendChild(label);
    }
    this.controlsEl.appendChild(themesBox);

    const weightLabel = document.createElement("label");
    weightLabel.className = "min-weight";
    weightLabel.textContent = `min edge weight: ${this.state.minWeight} `;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "1";
    slider.max = "10";
    slider.value = String(this.state.minWeight);
    slider.addEventListener("change", () => {
      void this.update((s) => {
        s.minWeight = Number(slider.value);
      });
    });
    weightLabel.appendChild(slider);
    this.controlsEl.appendChild(weightLabel);
  }

  private newspaperSelect(
    id: string,
    current: string,
    onChange: (value: string) => void,
    allowAll: boolean,
  ): HTMLElement {
    const select = document.createElement("select");
    select.id = id;
    if (allowAll) {
      const option = document.createElement("option");
      option.value = "";
      option.textContent = "(all newspapers)";
      select.appendChild(option);
    }
    for (const paper of this.newspapers) {
      const option = document.createElement("option");
      option.value = paper;
      option.textContent = paper;
      select.appendChild(option);
    }
    select.value = current;
    select.addEventListener("change", () => onChange(select.value));
    return select;
  }

  async refreshGraphs(): Promise<void> {
    const scopes = this.state.compare
      ? this.state.newspapers.slice(0, 2).map((paper) => ({ newspaper: paper }))
      : [{ newspaper: this.state.newspapers[0] }];
    try {
      this.displayed = await Promise.all(
        scopes.map((scope) =>
          this.api.graph({
            newspaper: scope.newspaper || undefined,
            themes: this.state.themes,
            minWeight: this.state.minWeight,
          }),
        ),
      );
    } catch (error) {
      renderFetchError(this.graphsEl, describe(error), () => void this.refreshGraphs());
      return;
    }

    // A selection that fell out of scope is dropped, so the pane never shows
    // a node missing from the view.
    if (
      this.state.selectedNode &&
      !this.displayed.some((graph) => graph.nodes.some((n) => n.id === this.state.selectedNode))
    ) {
      this.state.selectedNode = null;
      this.state.page = 0;
      this.paneEl.replaceChildren();
      this.syncHash();
    }

    this.graphsEl.replaceChildren();
    const flags = this.state.compare
      ? (() => {
          const diff = diffGraphs(this.displayed[0], this.displayed[1]);
          return [new Set(diff.aOnlyNodes), new Set(diff.bOnlyNodes)];
        })()
      : [new Set<string>()];
    this.displayed.forEach((graph, i) => {
      const slot = document.createElement("section");
      slot.className = "graph-slot";
      if (this.state.compare) {
        const caption = document.createElement("h3");
        caption.textContent = this.state.newspapers[i] ?? "";
        slot.appendChild(caption);
      }
      const host = document.createElement("div");
      slot.appendChild(host);
      this.graphsEl.appendChild(slot);
      renderGraph(host, graph, {
        seed: 42,
        flagged: flags[i],
        selected: this.state.selectedNode,
        onNodeClick: (nodeId) => void this.selectNode(nodeId),
      });
    });
  }

  async selectNode(nodeId: string): Promise<void> {
    this.state.selectedNode = nodeId;
    this.state.page = 0;
    this.syncHash();
    await this.refreshParagraphs();
  }

  async setSentiment(sentiment: SentimentSymbol | null): Promise<void> {
    this.state.sentiment = sentiment;
    this.state.page = 0;
    this.syncHash();
    await this.refreshParagraphs();
  }

  async setPage(page: number): Promise<void> {
    this.state.page = Math.max(0, page);
    this.syncHash();
    await this.refreshParagraphs();
  }

  async refreshParagraphs(): Promise<void> {
    const nodeId = this.state.selectedNode;
    if (!nodeId) return;
    try {
      const page = await this.api.nodeParagraphs(nodeId, {
        limit: PAGE_SIZE,
        offset: this.state.page * PAGE_SIZE,
        sentiment: this.state.sentiment,
      });
      renderParagraphPane(this.paneEl, nodeId, page, this.state.sentiment, {
        onPage: (next) => void this.setPage(next),
        onSentiment: (sentiment) => void this.setSentiment(sentiment),
      });
    } catch (error) {
      renderFetchError(this.paneEl, describe(error), () => void this.refreshParagraphs());
    }
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
