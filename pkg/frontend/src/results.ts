/** Ranked result list coupled to the widget: out-of-focus entries stay
 * visible but dimmed, and clicking an entry highlights its mark. */

import type { Hit } from "./types.js";

const SNIPPET_LENGTH = 180;

export type SelectCallback = (docId: string) => void;

export class ResultList {
  readonly el: HTMLElement;
  private readonly countEl: HTMLElement;
  private readonly listEl: HTMLElement;
  private selectCallback: SelectCallback | null = null;
  private selected: string | null = null;

  constructor(doc: Document) {
    this.el = doc.createElement("div");
    this.el.className = "result-list";
    this.countEl = doc.createElement("div");
    this.countEl.className = "result-count";
    this.el.appendChild(this.countEl);
    this.listEl = doc.createElement("ol");
    this.el.appendChild(this.listEl);
  }

  onSelect(callback: SelectCallback): void {
    this.selectCallback = callback;
  }

  render(hits: Hit[], totalMatches: number): void {
    const doc = this.el.ownerDocument;
    this.countEl.textContent = `${totalMatches} results`;
    while (this.listEl.firstChild) {
      this.listEl.removeChild(this.listEl.firstChild);
    }
    for (const hit of hits) {
      const item = doc.createElement("li");
      item.setAttribute("data-doc-id", hit.doc_id);
      item.setAttribute("data-focus", String(hit.in_focus));
      item.className = hit.in_focus ? "result" : "result out-of-focus";

      const title = doc.createElement("h3");
      title.textContent = hit.title;
      item.appendChild(title);

      const sentiment = doc.createElement("span");
      sentiment.className = "sentiment-values";
      sentiment.textContent =
        `positivity ${hit.positivity.toFixed(2)} / negativity ${hit.negativity.toFixed(2)}` +
        (hit.display_category ? ` · ${hit.display_category}` : "");
      item.appendChild(sentiment);

      const snippet = doc.createElement("p");
      snippet.textContent =
        hit.abstract.length > SNIPPET_LENGTH
          ? hit.abstract.slice(0, SNIPPET_LENGTH) + "…"
          : hit.abstract;
      item.appendChild(snippet);

      item.addEventListener("click", () => this.selectCallback?.(hit.doc_id));
      this.listEl.appendChild(item);
    }
    this.applySelection();
  }

  setSelected(docId: string | null): void {
    this.selected = docId;
    this.applySelection();
  }

  private applySelection(): void {
    for (const item of Array.from(this.listEl.children)) {
      const isTarget =
        this.selected !== null && item.getAttribute("data-doc-id") === this.selected;
      if (isTarget) {
        item.setAttribute("data-selected", "true");
      } else {
        item.removeAttribute("data-selected");
      }
    }
  }
}
