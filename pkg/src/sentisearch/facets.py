"""Bivariate sentiment filtering: rectangles, partitions, and distribution summaries.

Every filter widget reduces to one axis-aligned rectangle in (positivity,
negativity) space. Membership is a closed-interval test on both attributes,
so brushing exactly to a tick mark includes that value.
"""

import bisect
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence, TypeVar

SENTIMENT_MIN = 1.0
SENTIMENT_MAX = 5.0

# Equal terciles of [1, 5] used by the text-button widget.
TERCILE_LOW_MAX = 7.0 / 3.0
TERCILE_HIGH_MIN = 11.0 / 3.0

BUCKET_RANGES = {
    "low": (SENTIMENT_MIN, TERCILE_LOW_MAX),
    "mid": (TERCILE_LOW_MAX, TERCILE_HIGH_MIN),
    "high": (TERCILE_HIGH_MIN, SENTIMENT_MAX),
    "any": (SENTIMENT_MIN, SENTIMENT_MAX),
}

AXES = ("positivity", "negativity")

# Per-mark alpha; overlapping marks darken additively.
MARK_ALPHA = 0.25

T = TypeVar("T")


@dataclass(frozen=True)
class SentimentRect:
    """Closed axis-aligned rectangle in (positivity, negativity) space."""

    pos_min: float = SENTIMENT_MIN
    pos_max: float = SENTIMENT_MAX
    neg_min: float = SENTIMENT_MIN
    neg_max: float = SENTIMENT_MAX

    def __post_init__(self):
        for lo, hi, name in (
            (self.pos_min, self.pos_max, "positivity"),
            (self.neg_min, self.neg_max, "negativity"),
        ):
            if not (SENTIMENT_MIN <= lo <= hi <= SENTIMENT_MAX):
                raise ValueError(
                    f"{name} bounds must satisfy 1 <= lo <= hi <= 5, got [{lo}, {hi}]"
                )

    @classmethod
    def full(cls) -> "SentimentRect":
        return cls()

    def is_full(self) -> bool:
        return (
            self.pos_min == SENTIMENT_MIN
            and self.pos_max == SENTIMENT_MAX
            and self.neg_min == SENTIMENT_MIN
            and self.neg_max == SENTIMENT_MAX
        )

    def contains(self, positivity: float, negativity: float) -> bool:
        return (
            self.pos_min <= positivity <= self.pos_max
            and self.neg_min <= negativity <= self.neg_max
        )

    def to_dict(self) -> dict:
        return {
            "pos_min": self.pos_min,
            "pos_max": self.pos_max,
            "neg_min": self.neg_min,
            "neg_max": self.neg_max,
        }


FULL_RECT = SentimentRect()


@dataclass
class PartitionedResults:
    """Rank-ordered split of results into in-focus and out-of-focus lists."""

    in_focus: list
    out_of_focus: list


def _default_key(item) -> tuple[float, float]:
    return item.positivity, item.negativity


def partition_by_rect(
    items: Iterable[T],
    rect: SentimentRect,
    key: Callable[[T], tuple[float, float]] = _default_key,
) -> PartitionedResults:
    """Stable partition of `items` by closed-interval membership in `rect`.

    Out-of-focus items are kept (the widgets render them dimmed, never drop
    them), and both lists preserve the input order.
    """
    in_focus, out_of_focus = [], []
    for item in items:
        positivity, negativity = key(item)
        if rect.contains(positivity, negativity):
            in_focus.append(item)
        else:
            out_of_focus.append(item)
    return PartitionedResults(in_focus=in_focus, out_of_focus=out_of_focus)


def axis_brush_to_rect(
    axis: str, lo: float, hi: float, current: SentimentRect
) -> SentimentRect:
    """Replace one axis of `current` with [lo, hi], leaving the other untouched.

    This reduces a parallel-coordinates axis brush to the shared rectangle
    semantics.
    """
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}, expected one of {AXES}")
    if lo > hi:
        raise ValueError(f"brush range inverted: lo={lo} > hi={hi}")
    if not (SENTIMENT_MIN <= lo and hi <= SENTIMENT_MAX):
        raise ValueError(f"brush range [{lo}, {hi}] outside [1, 5]")
    if axis == "positivity":
        return replace(current, pos_min=lo, pos_max=hi)
    return replace(current, neg_min=lo, neg_max=hi)


def bucket_rect(pos_bucket: str = "any", neg_bucket: str = "any") -> SentimentRect:
    """Rectangle for a pair of text-button selections (equal terciles of [1, 5])."""
    try:
        pos_lo, pos_hi = BUCKET_RANGES[pos_bucket]
        neg_lo, neg_hi = BUCKET_RANGES[neg_bucket]
    except KeyError as exc:
        raise ValueError(
            f"unknown bucket {exc.args[0]!r}, expected one of {tuple(BUCKET_RANGES)}"
        ) from None
    return SentimentRect(pos_min=pos_lo, pos_max=pos_hi, neg_min=neg_lo, neg_max=neg_hi)


@dataclass
class AttributeSummary:
    """Histogram plus exact mean / population stddev for one sentiment attribute."""

    bin_edges: list
    counts: list
    mean: float
    stddev: float
    count: int

    def to_dict(self) -> dict:
        return {
            "bin_edges": self.bin_edges,
            "counts": self.counts,
            "mean": self.mean,
            "stddev": self.stddev,
            "count": self.count,
        }


@dataclass
class DistributionSummary:
    positivity: AttributeSummary
    negativity: AttributeSummary

    def to_dict(self) -> dict:
        return {
            "positivity": self.positivity.to_dict(),
            "negativity": self.negativity.to_dict(),
        }


def summarize_values(values: Sequence[float], bin_count: int) -> AttributeSummary:
    """Equal-width histogram over [1, 5] (right-open bins, last closed) with
    exact mean and population standard deviation."""
    if not values:
        raise ValueError("cannot summarize an empty value list")
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    edges = [SENTIMENT_MIN + 4.0 * i / bin_count for i in range(bin_count + 1)]
    counts = [0] * bin_count
    for v in values:
        idx = bisect.bisect_right(edges, v) - 1
        if idx >= bin_count:  # 5.0 falls in the last (closed) bin
            idx = bin_count - 1
        elif idx < 0:
            idx = 0
        counts[idx] += 1
    n = len(values)
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / n
    return AttributeSummary(
        bin_edges=edges,
        counts=counts,
        mean=mean,
        stddev=math.sqrt(variance),
        count=n,
    )


def distribution_summary(
    items: Sequence[T],
    bin_count: int,
    key: Callable[[T], tuple[float, float]] = _default_key,
) -> DistributionSummary:
    """Per-attribute summaries over a corpus or result set."""
    if not items:
        raise ValueError("cannot summarize an empty result set")
    pairs = [key(item) for item in items]
    return DistributionSummary(
        positivity=summarize_values([p for p, _ in pairs], bin_count),
        negativity=summarize_values([n for _, n in pairs], bin_count),
    )


def opacity_for_density(overlap_count: int, base_alpha: float = MARK_ALPHA) -> float:
    """Effective darkness where `overlap_count` marks of constant alpha overlap.

    Marks are drawn at a constant per-mark alpha; density emerges from
    compositing, so k stacked marks read as 1 - (1 - alpha)^k.
    """
    if overlap_count < 1:
        raise ValueError(f"overlap_count must be >= 1, got {overlap_count}")
    if not (0.0 < base_alpha <= 1.0):
        raise ValueError(f"base_alpha must be in (0, 1], got {base_alpha}")
    return 1.0 - (1.0 - base_alpha) ** overlap_count
