/** Controller for one treatment screen: a query box, exactly one filter
 * widget, and the result list, with brushing-and-linking between them.
 *
 * Event-kind separation: typing a query logs a query event and never a
 * filter_change; brushing logs a filter_change and never a query. At most one
 * search request is in flight; superseded responses are discarded.
 */

import type { SearchClient } from "./api.js";
import type { EventLogger } from "./events.js";
import type { Hit, SearchResponse, SentimentRect, Treatment } from "./types.js";
import { fullRect } from "./rect.js";
import type { FilterWidget } from "./widgets/base.js";
import { ScatterWidget } from "./widgets/scatter.js";
import { ParallelWidget } from "./widgets/parallel.js";
import { ButtonsWidget } from "./widgets/buttons.js";
import { ResultList } from "./results.js";

export interface AppOptions {
  doc: Document;
  client: SearchClient;
  logger: EventLogger;
  treatment: Treatment;
}

export function widgetForTreatment(doc: Document, treatment: Treatment): FilterWidget {
  switch (treatment) {
    case "SC":
      return new ScatterWidget(doc);
    case "PC":
      return new ParallelWidget(doc);
    case "BA":
      return new ButtonsWidget(doc);
  }
}

export class SearchApp {
  readonly el: HTMLElement;
  readonly widget: FilterWidget;
  readonly results: ResultList;
  readonly treatment: Treatment;

  private readonly client: SearchClient;
  private readonly logger: EventLogger;
  private query: string | null = null;
  private rect: SentimentRect = fullRect();
  private requestSeq = 0;
  private lastResponse: SearchResponse | null = null;
  private highlighted: string | null = null;

  constructor(options: AppOptions) {
    this.client = options.client;
    this.logger = options.logger;
    this.treatment = options.treatment;
    const doc = options.doc;
    this.el = doc.createElement("div");
    this.el.className = "search-app";
    this.el.setAttribute("data-treatment", options.treatment);
    this.widget = widgetForTreatment(doc, options.treatment);
    this.el.appendChild(this.widget.el);
    this.results = new ResultList(doc);
    this.el.appendChild(this.results.el);

    this.widget.onBrush((rect) => {
      void this.applyBrush(rect);
    });
    this.results.onSelect((docId) => {
      void this.selectResult(docId);
    });
  }

  get activeRect(): SentimentRect {
    return this.rect;
  }

  get response(): SearchResponse | null {
    return this.lastResponse;
  }

  /** Issue a new query (logged as a query event; the filter persists). */
  async submitQuery(text: string): Promise<SearchResponse | null> {
    const trimmed = text.trim();
    if (!trimmed) {
      return null;
    }
    this.query = trimmed;
    await this.logger.query(trimmed);
    return this.fetchAndRender();
  }

  /** Apply a rectangle coming from any widget gesture (logged as a
   * filter_change event; never a query event). */
  async applyBrush(rect: SentimentRect): Promise<SearchResponse | null> {
    this.rect = rect;
    await this.logger.filterChange(rect);
    if (this.query === null) {
      return null; // nothing to refetch yet; the rect applies to the next query
    }
    return this.fetchAndRender();
  }

  /** Highlight the widget mark for a result (logged as result_select). */
  async selectResult(docId: string): Promise<void> {
    if (!this.lastResponse?.hits.some((h) => h.doc_id === docId)) {
      return; // unknown doc: no-op
    }
    this.highlighted = docId;
    this.widget.highlight(docId);
    this.results.setSelected(docId);
    await this.logger.resultSelect(docId);
  }

  clearHighlight(): void {
    this.highlighted = null;
    this.widget.highlight(null);
    this.results.setSelected(null);
  }

  private async fetchAndRender(): Promise<SearchResponse | null> {
    const seq = ++this.requestSeq;
    const response = await this.client.search(this.query as string, this.rect);
    if (seq !== this.requestSeq) {
      return null; // superseded by a newer request: latest wins
    }
    this.lastResponse = response;
    this.widget.render(response.hits, response.active_rect);
    this.results.render(response.hits, response.total_matches);
    if (this.highlighted) {
      this.widget.highlight(this.highlighted);
      this.results.setSelected(this.highlighted);
    }
    return response;
  }

  /** doc_ids of marks currently rendered as dimmed (out of focus). */
  dimmedDocIds(): Set<string> {
    const dimmed = new Set<string>();
    for (const mark of Array.from(
      this.widget.el.querySelectorAll("[data-doc-id][data-focus=false]"),
    )) {
      dimmed.add(mark.getAttribute("data-doc-id") as string);
    }
    return dimmed;
  }

  hitsOutOfFocus(): Set<string> {
    const out = new Set<string>();
    for (const hit of this.lastResponse?.hits ?? []) {
      if (!hit.in_focus) {
        out.add(hit.doc_id);
      }
    }
    return out;
  }
}

export type { Hit };
