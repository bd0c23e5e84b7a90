/** Sentiment rectangle helpers shared by all three widgets.
 *
 * Every gesture compiles down to one closed rectangle in (positivity,
 * negativity) space; the server owns the authoritative membership test, these
 * helpers only build the rectangle a gesture means.
 */

import type { SentimentRect } from "./types.js";

export const SENTIMENT_MIN = 1;
export const SENTIMENT_MAX = 5;

export const TERCILE_LOW_MAX = 7 / 3;
export const TERCILE_HIGH_MIN = 11 / 3;

export type Axis = "positivity" | "negativity";
export type Bucket = "low" | "mid" | "high" | "any";

export const BUCKET_RANGES: Record<Bucket, [number, number]> = {
  low: [SENTIMENT_MIN, TERCILE_LOW_MAX],
  mid: [TERCILE_LOW_MAX, TERCILE_HIGH_MIN],
  high: [TERCILE_HIGH_MIN, SENTIMENT_MAX],
  any: [SENTIMENT_MIN, SENTIMENT_MAX],
};

export function fullRect(): SentimentRect {
  return {
    pos_min: SENTIMENT_MIN,
    pos_max: SENTIMENT_MAX,
    neg_min: SENTIMENT_MIN,
    neg_max: SENTIMENT_MAX,
  };
}

export function isFullRect(rect: SentimentRect): boolean {
  return (
    rect.pos_min === SENTIMENT_MIN &&
    rect.pos_max === SENTIMENT_MAX &&
    rect.neg_min === SENTIMENT_MIN &&
    rect.neg_max === SENTIMENT_MAX
  );
}

export function rectsEqual(a: SentimentRect, b: SentimentRect): boolean {
  return (
    a.pos_min === b.pos_min &&
    a.pos_max === b.pos_max &&
    a.neg_min === b.neg_min &&
    a.neg_max === b.neg_max
  );
}

export function rectContains(rect: SentimentRect, positivity: number, negativity: number): boolean {
  return (
    rect.pos_min <= positivity &&
    positivity <= rect.pos_max &&
    rect.neg_min <= negativity &&
    negativity <= rect.neg_max
  );
}

export function clampSentiment(value: number): number {
  return Math.min(SENTIMENT_MAX, Math.max(SENTIMENT_MIN, value));
}

/** Replace one axis of `current` with [lo, hi]; the other axis is untouched. */
export function axisBrushToRect(
  axis: Axis,
  lo: number,
  hi: number,
  current: SentimentRect,
): SentimentRect {
  if (lo > hi) {
    throw new Error(`brush range inverted: ${lo} > ${hi}`);
  }
  if (lo < SENTIMENT_MIN || hi > SENTIMENT_MAX) {
    throw new Error(`brush range [${lo}, ${hi}] outside [1, 5]`);
  }
  if (axis === "positivity") {
    return { ...current, pos_min: lo, pos_max: hi };
  }
  return { ...current, neg_min: lo, neg_max: hi };
}

/** Rectangle for a pair of baseline-button selections (terciles of [1, 5]). */
export function bucketRect(posBucket: Bucket, negBucket: Bucket): SentimentRect {
  const [posLo, posHi] = BUCKET_RANGES[posBucket];
  const [negLo, negHi] = BUCKET_RANGES[negBucket];
  return { pos_min: posLo, pos_max: posHi, neg_min: negLo, neg_max: negHi };
}
