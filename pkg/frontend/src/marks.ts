/** Shared mark styling: constant per-mark alpha (density reads through
 * additive overlap), a dimmed alpha for out-of-focus results, and a bounded
 * categorical palette. */

export const MARK_ALPHA = 0.25;
export const DIM_FACTOR = 0.3;
export const DIM_ALPHA = MARK_ALPHA * DIM_FACTOR;

export const HIGHLIGHT_STROKE = "#111111";
export const HIGHLIGHT_STROKE_WIDTH = 2.5;

// 24 distinguishable categorical colors; "other" renders grey.
export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31",
  "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1",
  "#636363", "#9c9ede", "#cedb9c", "#e7ba52", "#ad494a", "#ce6dbd",
];
export const OTHER_COLOR = "#999999";

export function alphaFor(inFocus: boolean): number {
  return inFocus ? MARK_ALPHA : DIM_ALPHA;
}

/** Stable color for a display category (hash into the palette). */
export function categoryColor(category: string): string {
  if (!category || category === "other") {
    return OTHER_COLOR;
  }
  let hash = 0;
  for (let i = 0; i < category.length; i++) {
    hash = (hash * 31 + category.charCodeAt(i)) >>> 0;
  }
  return PALETTE[hash % PALETTE.length];
}
