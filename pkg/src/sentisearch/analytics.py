"""Engagement metrics, the explorer/achiever taxonomy, nonparametric tests,
and the two study report documents.

Rank-sum comparisons run exactly (full null-distribution enumeration) at small
sample sizes without ties, and fall back to the tie-corrected normal
approximation otherwise; the result always names the path taken.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .special import chi2_sf, normal_sf

CANONICAL_TREATMENTS = ("BA", "SC", "PC")

# Table layout constants for the two report documents.
TREATMENT_REPORT_COLUMNS = ("BA", "PC", "SC")
TREATMENT_METRIC_LABELS = (
    "Query Count",
    "Task Time (s)",
    "Perceived Time",
    "Cognitive Engagement",
    "Aesthetics",
)
TAXONOMY_TOTAL_LABELS = ("Total Queries", "Total Time")
TAXONOMY_METRIC_PREFIXES = ("Queries", "Task Time", "Perceived Time", "C. Engagement")

EXACT_RANK_SUM_MAX_GROUP = 10

ACHIEVER = "achiever"
EXPLORER = "explorer"


class DegenerateDataError(Exception):
    """All observations tied; the rank test is undefined."""


class InsufficientDataError(Exception):
    """Not enough users / groups to build the requested output."""


@dataclass(frozen=True)
class StatTestResult:
    statistic: float
    p_value: float
    method: str  # "exact" | "normal-approximation" | "chi-squared"


@dataclass(frozen=True)
class UserClassification:
    user_id: str
    exploration_score: float
    user_class: str  # ACHIEVER | EXPLORER


def cognitive_engagement(task_time_s: float, perceived_time_s: float) -> float:
    """Actual minus perceived task duration; positive means positive engagement."""
    if task_time_s <= 0:
        raise ValueError(f"task_time_s must be positive, got {task_time_s}")
    if perceived_time_s <= 0:
        raise ValueError(f"perceived_time_s must be positive, got {perceived_time_s}")
    return task_time_s - perceived_time_s


def exploration_score(total_task_time_s: float, total_queries: int) -> float:
    """Geometric mean of total task time and total query count."""
    if total_task_time_s <= 0:
        raise ValueError(f"total_task_time_s must be positive, got {total_task_time_s}")
    if total_queries <= 0:
        raise ValueError(f"total_queries must be positive, got {total_queries}")
    return math.sqrt(total_task_time_s * total_queries)


def classify_users(scores) -> list:
    """Split users at the median exploration score.

    The bottom floor(N/2) by score are achievers, the rest explorers; ties are
    broken by user_id ascending so the split is deterministic.
    """
    scores = list(scores)
    if len(scores) < 2:
        raise InsufficientDataError(
            f"classification needs at least 2 users, got {len(scores)}"
        )
    ordered = sorted(scores, key=lambda pair: (pair[1], pair[0]))
    cutoff = len(ordered) // 2
    return [
        UserClassification(
            user_id=user_id,
            exploration_score=score,
            user_class=ACHIEVER if position < cutoff else EXPLORER,
        )
        for position, (user_id, score) in enumerate(ordered)
    ]


def _midranks(values) -> list:
    """Ranks 1..n with tied values sharing the average of their rank range."""
    n = len(values)
    order = sorted(range(n), key=values.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _tie_term(values) -> float:
    """Sum of t^3 - t over groups of tied values."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values()))


def kruskal_wallis(groups) -> StatTestResult:
    """Rank-based analysis of variance across two or more independent groups.

    Uses midranks for ties and divides H by the tie-correction factor
    1 - sum(t^3 - t) / (n^3 - n); the p-value comes from the chi-squared upper
    tail with (groups - 1) degrees of freedom.
    """
    groups = [list(g) for g in groups]
    if len(groups) < 2:
        raise ValueError(f"need at least 2 groups, got {len(groups)}")
    if any(len(g) == 0 for g in groups):
        raise ValueError("every group must be non-empty")
    pooled = [v for g in groups for v in g]
    n = len(pooled)
    if n < 3:
        raise ValueError(f"need at least 3 observations in total, got {n}")
    ranks = _midranks(pooled)
    h = 0.0
    offset = 0
    for g in groups:
        r = math.fsum(ranks[offset : offset + len(g)])
        h += r * r / len(g)
        offset += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)
    correction = 1.0 - _tie_term(pooled) / (n**3 - n)
    if correction == 0.0:
        raise DegenerateDataError("all values identical across all groups")
    h /= correction
    return StatTestResult(
        statistic=h,
        p_value=chi2_sf(h, len(groups) - 1),
        method="chi-squared",
    )


@lru_cache(maxsize=None)
def _u_counts(m: int, n: int) -> tuple:
    """Null distribution of the U statistic for group sizes (m, n) without ties.

    counts[u] is the number of the C(m+n, m) rank arrangements whose U equals
    u, via the classic recurrence c(u; m, n) = c(u-n; m-1, n) + c(u; m, n-1).
    """
    if m == 0 or n == 0:
        return (1,)
    shifted = _u_counts(m - 1, n)
    reduced = _u_counts(m, n - 1)
    out = []
    for u in range(m * n + 1):
        total = 0
        if 0 <= u - n < len(shifted):
            total += shifted[u - n]
        if u < len(reduced):
            total += reduced[u]
        out.append(total)
    return tuple(out)


def _exact_two_sided_p(n_a: int, n_b: int, u_min: int) -> float:
    counts = _u_counts(n_a, n_b)
    total = math.comb(n_a + n_b, n_a)
    low = sum(counts[: u_min + 1])
    high = sum(counts[n_a * n_b - u_min :])
    return min(1.0, (low + high) / total)


def rank_sum_test(a, b) -> StatTestResult:
    """Two-sided Mann-Whitney rank-sum comparison of two independent groups.

    Exact enumeration when both groups have at most 10 values and no ties are
    present; otherwise the normal approximation with tie-corrected variance
    and continuity correction. The statistic reported is U of the first group.
    """
    a, b = list(a), list(b)
    if not a or not b:
        raise ValueError("both groups must be non-empty")
    n_a, n_b = len(a), len(b)
    n = n_a + n_b
    pooled = a + b
    ranks = _midranks(pooled)
    r_a = math.fsum(ranks[:n_a])
    u_a = r_a - n_a * (n_a + 1) / 2.0
    u_b = n_a * n_b - u_a

    if max(n_a, n_b) <= EXACT_RANK_SUM_MAX_GROUP and len(set(pooled)) == n:
        p = _exact_two_sided_p(n_a, n_b, int(round(min(u_a, u_b))))
        return StatTestResult(statistic=u_a, p_value=p, method="exact")

    mean = n_a * n_b / 2.0
    variance = n_a * n_b / 12.0 * ((n + 1) - _tie_term(pooled) / (n * (n - 1)))
    sd = math.sqrt(max(0.0, variance))
    if sd == 0.0:
        p = 1.0  # every pooled value identical: no evidence either way
    else:
        z = max(0.0, (abs(u_a - mean) - 0.5) / sd)
        p = min(1.0, 2.0 * normal_sf(z))
    return StatTestResult(statistic=u_a, p_value=p, method="normal-approximation")


def bonferroni_threshold(alpha: float, comparisons: int) -> float:
    """Per-comparison significance level for a family of pairwise tests."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if comparisons < 1:
        raise ValueError(f"comparisons must be >= 1, got {comparisons}")
    return alpha / comparisons


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _engagement_value(m):
    if m.perceived_time_s is None:
        return None
    try:
        return cognitive_engagement(m.task_time_s, m.perceived_time_s)
    except ValueError:
        return None


_TREATMENT_EXTRACTORS = (
    ("Query Count", lambda m: float(m.query_count)),
    ("Task Time (s)", lambda m: m.task_time_s),
    ("Perceived Time", lambda m: m.perceived_time_s),
    ("Cognitive Engagement", _engagement_value),
    ("Aesthetics", lambda m: None if m.aesthetics_total is None else float(m.aesthetics_total)),
)


def _stat_test_dict(result: StatTestResult, threshold: float) -> dict:
    return {
        "U": result.statistic,
        "p": result.p_value,
        "method": result.method,
        "significant": bool(result.p_value < threshold),
    }


def build_treatment_report(metrics, treatments=None, alpha: float = 0.05) -> dict:
    """Per-treatment means, Kruskal-Wallis omnibus results, and
    Bonferroni-corrected pairwise rank-sum comparisons for every study metric.

    Users missing a questionnaire are excluded from the perceived-time,
    engagement, and aesthetics rows only. Degenerate metrics (all values tied)
    carry an error entry; the report is still emitted for the others.
    """
    metrics = list(metrics)
    if not metrics:
        raise InsufficientDataError("no session metrics to report on")
    present = {m.treatment for m in metrics}
    if treatments is None:
        treatments = [t for t in TREATMENT_REPORT_COLUMNS if t in present]
    else:
        treatments = list(treatments)
        for t in treatments:
            if t not in present:
                raise InsufficientDataError(f"treatment {t} has zero users")
    if len(treatments) < 2:
        raise InsufficientDataError(
            f"need at least 2 treatments, got {len(treatments)}"
        )
    pairs = list(combinations(treatments, 2))
    threshold = bonferroni_threshold(alpha, len(pairs))

    by_treatment = {t: [m for m in metrics if m.treatment == t] for t in treatments}
    rows = {}
    for label, extract in _TREATMENT_EXTRACTORS:
        groups = {
            t: [v for v in (extract(m) for m in by_treatment[t]) if v is not None]
            for t in treatments
        }
        row = {
            "means": {t: (_mean(groups[t]) if groups[t] else None) for t in treatments},
            "n": {t: len(groups[t]) for t in treatments},
        }
        group_values = [groups[t] for t in treatments]
        if all(group_values) and sum(len(g) for g in group_values) >= 3:
            try:
                kw = kruskal_wallis(group_values)
                row["kruskal_wallis"] = {"K": kw.statistic, "p": kw.p_value}
            except DegenerateDataError as exc:
                row["kruskal_wallis"] = {"error": str(exc)}
        else:
            row["kruskal_wallis"] = {"error": "insufficient data"}
        posthoc = {}
        for t1, t2 in pairs:
            key = f"{t1} vs {t2}"
            if groups[t1] and groups[t2]:
                posthoc[key] = _stat_test_dict(
                    rank_sum_test(groups[t1], groups[t2]), threshold
                )
            else:
                posthoc[key] = {"error": "insufficient data"}
        row["posthoc"] = posthoc
        rows[label] = row

    return {
        "report": "treatment",
        "alpha": alpha,
        "comparisons": len(pairs),
        "bonferroni_threshold": threshold,
        "treatments": list(treatments),
        "participants": {t: len(by_treatment[t]) for t in treatments},
        "metrics": rows,
    }


def classification_from_metrics(metrics) -> tuple:
    """Derive per-user exploration scores from session metrics and classify.

    Users whose score is undefined (zero queries or zero total time) cannot be
    classified; they are returned separately, never silently dropped.
    """
    total_time: dict = {}
    total_queries: dict = {}
    for m in metrics:
        total_time[m.user_id] = total_time.get(m.user_id, 0.0) + m.task_time_s
        total_queries[m.user_id] = total_queries.get(m.user_id, 0) + m.query_count
    scores = []
    excluded = []
    for user_id in sorted(total_time):
        try:
            score = exploration_score(total_time[user_id], total_queries[user_id])
        except ValueError as exc:
            excluded.append({"user_id": user_id, "reason": str(exc)})
            continue
        scores.append((user_id, score))
    if len(scores) < 2:
        raise InsufficientDataError(
            f"classification needs at least 2 users with defined scores, got {len(scores)}"
        )
    return classify_users(scores), excluded


def build_taxonomy_report(metrics, classifications, alpha: float = 0.05) -> dict:
    """Achiever/explorer mean comparison for totals and every
    (metric, treatment) row, each with its rank-sum p-value."""
    metrics = list(metrics)
    if not metrics:
        raise InsufficientDataError("no session metrics to report on")
    class_of = {c.user_id: c.user_class for c in classifications}
    for m in metrics:
        if m.user_id not in class_of:
            raise InsufficientDataError(f"user {m.user_id} not classified")
    achievers = sorted(u for u, cls in class_of.items() if cls == ACHIEVER)
    explorers = sorted(u for u, cls in class_of.items() if cls == EXPLORER)
    if not achievers or not explorers:
        raise InsufficientDataError("both classes need at least one user")

    treatments = [
        t for t in CANONICAL_TREATMENTS if any(m.treatment == t for m in metrics)
    ]
    total_time: dict = {}
    total_queries: dict = {}
    per_cell: dict = {}  # (user, treatment) -> SessionMetrics
    for m in metrics:
        total_time[m.user_id] = total_time.get(m.user_id, 0.0) + m.task_time_s
        total_queries[m.user_id] = total_queries.get(m.user_id, 0) + m.query_count
        per_cell[(m.user_id, m.treatment)] = m

    def row_values(users, value_of):
        out = []
        for u in users:
            v = value_of(u)
            if v is not None:
                out.append(v)
        return out

    def build_row(value_of) -> dict:
        a_values = row_values(achievers, value_of)
        e_values = row_values(explorers, value_of)
        if not a_values or not e_values:
            return {"error": "insufficient data"}
        test = rank_sum_test(a_values, e_values)
        return {
            "achiever_mean": _mean(a_values),
            "explorer_mean": _mean(e_values),
            "achiever_n": len(a_values),
            "explorer_n": len(e_values),
            "U": test.statistic,
            "p": test.p_value,
            "method": test.method,
        }

    def cell_extractor(treatment, field):
        def value_of(user):
            m = per_cell.get((user, treatment))
            if m is None:
                return None
            return field(m)

        return value_of

    rows = {
        "Total Queries": build_row(lambda u: float(total_queries.get(u, 0)) or None),
        "Total Time": build_row(lambda u: total_time.get(u)),
    }
    for prefix, field in (
        ("Queries", lambda m: float(m.query_count)),
        ("Task Time", lambda m: m.task_time_s),
        ("Perceived Time", lambda m: m.perceived_time_s),
        ("C. Engagement", _engagement_value),
    ):
        for t in treatments:
            rows[f"{prefix} {t}"] = build_row(cell_extractor(t, field))

    return {
        "report": "taxonomy",
        "alpha": alpha,
        "achievers": achievers,
        "explorers": explorers,
        "rows": rows,
    }
