/** Baseline text-button widget: one row of tercile buttons per sentiment
 * attribute (any / low / mid / high). The pressed pair compiles to the shared
 * rectangle semantics. */

import type { Hit, SentimentRect } from "../types.js";
import { BUCKET_RANGES, Bucket, bucketRect, rectsEqual } from "../rect.js";
import type { BrushCallback, FilterWidget } from "./base.js";

const BUCKETS: Bucket[] = ["any", "low", "mid", "high"];
const LABELS: Record<Bucket, string> = {
  any: "any",
  low: "low",
  mid: "mid",
  high: "high",
};

export class ButtonsWidget implements FilterWidget {
  readonly el: HTMLElement;
  private brushCallback: BrushCallback | null = null;
  private posBucket: Bucket = "any";
  private negBucket: Bucket = "any";
  private readonly buttons = new Map<string, HTMLButtonElement>();

  constructor(doc: Document) {
    this.el = doc.createElement("div");
    this.el.className = "widget buttons-widget";
    this.el.setAttribute("data-widget", "buttons");
    for (const axis of ["positivity", "negativity"] as const) {
      const row = doc.createElement("div");
      row.className = "bucket-row";
      const label = doc.createElement("span");
      label.textContent = `${axis}: `;
      row.appendChild(label);
      for (const bucket of BUCKETS) {
        const button = doc.createElement("button");
        button.type = "button";
        button.textContent = LABELS[bucket];
        button.setAttribute("data-axis", axis);
        button.setAttribute("data-bucket", bucket);
        button.addEventListener("click", () => this.press(axis, bucket));
        this.buttons.set(`${axis}:${bucket}`, button);
        row.appendChild(button);
      }
      this.el.appendChild(row);
    }
    this.updatePressedState();
  }

  onBrush(callback: BrushCallback): void {
    this.brushCallback = callback;
  }

  /** Buttons have no marks to draw; rendering only syncs the pressed state
   * with the active rectangle. */
  render(hits: Hit[], rect: SentimentRect): void {
    void hits;
    this.syncFromRect(rect);
  }

  highlight(docId: string | null): void {
    void docId; // no marks to highlight in the text baseline
  }

  press(axis: "positivity" | "negativity", bucket: Bucket): void {
    if (axis === "positivity") {
      this.posBucket = bucket;
    } else {
      this.negBucket = bucket;
    }
    this.updatePressedState();
    this.brushCallback?.(bucketRect(this.posBucket, this.negBucket));
  }

  private syncFromRect(rect: SentimentRect): void {
    for (const pos of BUCKETS) {
      for (const neg of BUCKETS) {
        if (rectsEqual(rect, bucketRect(pos, neg))) {
          this.posBucket = pos;
          this.negBucket = neg;
          this.updatePressedState();
          return;
        }
      }
    }
    // a rect from another gesture source; no button pair matches it
  }

  private updatePressedState(): void {
    for (const [key, button] of this.buttons) {
      const [axis, bucket] = key.split(":");
      const active =
        axis === "positivity" ? this.posBucket === bucket : this.negBucket === bucket;
      button.setAttribute("aria-pressed", String(active));
    }
  }

  bucketBounds(bucket: Bucket): [number, number] {
    return BUCKET_RANGES[bucket];
  }
}
