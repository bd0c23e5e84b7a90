/** Shared widget plumbing: the filter-widget contract and linear scales
 * between sentiment values and pixels. Axes always span [1, 5]. */

import type { Hit, SentimentRect } from "../types.js";
import { SENTIMENT_MAX, SENTIMENT_MIN, clampSentiment } from "../rect.js";

export const SVG_NS = "http://www.w3.org/2000/svg";

export type BrushCallback = (rect: SentimentRect) => void;

export interface FilterWidget {
  readonly el: Element;
  /** Redraw marks for `hits` under the active rectangle. */
  render(hits: Hit[], rect: SentimentRect): void;
  /** Single-selection highlight; null clears. Unknown ids are a no-op. */
  highlight(docId: string | null): void;
  onBrush(callback: BrushCallback): void;
}

export interface Frame {
  width: number;
  height: number;
  margin: number;
}

export const DEFAULT_FRAME: Frame = { width: 360, height: 340, margin: 34 };

export function valueToPixel(value: number, extent: number): number {
  return ((value - SENTIMENT_MIN) / (SENTIMENT_MAX - SENTIMENT_MIN)) * extent;
}

export function pixelToValue(pixel: number, extent: number): number {
  return clampSentiment(
    SENTIMENT_MIN + (pixel / extent) * (SENTIMENT_MAX - SENTIMENT_MIN),
  );
}

export function svgElement<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function clearChildren(el: Element): void {
  while (el.firstChild) {
    el.removeChild(el.firstChild);
  }
}
